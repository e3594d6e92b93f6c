#include "bdsfs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "bdsfs/approx.hpp"
#include "bdsfs/bdmath.hpp"
#include "bdsfs/coalescent.hpp"
#include "bdsfs/contour.hpp"
#include "bdsfs/forward.hpp"
#include "bdsfs/sfsstats.hpp"
#include "bdsfs/stats.hpp"

namespace bdsfs::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_reps(const ExperimentConfig& config) {
    if (config.reps < 1) throw std::invalid_argument("experiment: reps must be >= 1");
}

void require_lln_condition(const ExperimentConfig& config, double T) {
    double proxy = config.n * std::exp(-config.params.r() * T);
    if (!(proxy < 0.1))
        throw ConditionViolated("LLN condition n e^{-rT} < 0.1 violated (got " +
                                std::to_string(proxy) + ")");
}

void require_clt_condition(const ExperimentConfig& config, double T) {
    double n = config.n;
    double proxy = std::pow(n, 1.5) * std::log(n) * std::exp(-config.params.r() * T);
    if (!(proxy < 0.1))
        throw ConditionViolated("CLT condition n^{3/2} log(n) e^{-rT} < 0.1 violated (got " +
                                std::to_string(proxy) + ")");
}

double two_sided_normal_p(double z) {
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

}  // namespace

TRule TRule::explicit_t(double T) {
    if (!(T > 0.0)) throw std::invalid_argument("TRule: T must be > 0");
    return {Kind::explicit_t, T};
}

TRule TRule::named(const std::string& name) {
    if (name == "lln") return {Kind::lln, 0.0};
    if (name == "clt") return {Kind::clt, 0.0};
    throw std::invalid_argument("TRule: unknown rule '" + name + "' (use lln or clt)");
}

double TRule::resolve(int n, double r) const {
    switch (kind) {
        case Kind::explicit_t: return T;
        case Kind::lln: return 2.0 * std::log(static_cast<double>(n)) / r;
        case Kind::clt: {
            double ln = std::log(static_cast<double>(n));
            return (2.0 * ln + std::log(ln) + 5.0) / r;
        }
    }
    throw std::logic_error("TRule: bad kind");
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    double error = 0.0;
    double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 15, 1e-10, &error);
    if (!(error < 1e-8)) throw QuadratureNotConverged();
    return value;
}

TestReport run_lln(const ExperimentConfig& config) {
    require_reps(config);
    if (config.k < 2) throw std::invalid_argument("run_lln: k must be >= 2");
    double T = config.t_rule.resolve(config.n, config.params.r());
    require_lln_condition(config, T);
    SamplingFrame frame(config.n, T);

    stats::RunningStat stat;
    for (long rep = 0; rep < config.reps; ++rep) {
        Rng rng(config.seed, static_cast<std::uint64_t>(rep));
        long rk = 0;
        switch (config.mode) {
            case Mode::coalescent: {
                auto tree = coalescent::sample_tree(config.params, frame, rng);
                auto marked = coalescent::place_mutations(tree, config.params, rng);
                auto report = sfsstats::sfs_from_marked_tree(marked);
                rk = report.R[config.k];
                break;
            }
            case Mode::approx:
                rk = approx::approx_r_k(config.params, frame, config.k, rng);
                break;
            default:
                throw std::invalid_argument("run_lln: mode must be coalescent or approx");
        }
        stat.add(static_cast<double>(rk) / config.n);
    }

    TestReport report;
    report.experiment = "lln_k" + std::to_string(config.k);
    report.target = sfsstats::asymptotic_r_mean(config.params, config.k);
    report.estimate = stat.mean();
    report.mc_stderr = config.reps > 1 ? stat.stderr_mean() : 0.0;
    report.statistic = report.mc_stderr > 0.0
                           ? (report.estimate - report.target) / report.mc_stderr
                           : 0.0;
    report.p_value = report.mc_stderr > 0.0 ? two_sided_normal_p(report.statistic) : 1.0;
    report.reps_used = config.reps;
    report.seed = config.seed;
    report.passed = std::fabs(report.estimate - report.target) <= 0.02 * report.target;
    return report;
}

std::vector<TestReport> run_clt(const ExperimentConfig& config) {
    require_reps(config);
    double T = config.t_rule.resolve(config.n, config.params.r());
    require_clt_condition(config, T);
    SamplingFrame frame(config.n, T);
    auto limits = sfsstats::asymptotic_clt_params(config.params);
    double sqrt_n = std::sqrt(static_cast<double>(config.n));
    bool with_mutations = config.params.nu > 0.0;

    std::vector<double> zr, zm;
    zr.reserve(config.reps);
    for (long rep = 0; rep < config.reps; ++rep) {
        Rng rng(config.seed, static_cast<std::uint64_t>(rep));
        long r_ge2 = 0, m_ge2 = 0;
        switch (config.mode) {
            case Mode::coalescent: {
                auto tree = coalescent::sample_tree(config.params, frame, rng);
                auto marked = coalescent::place_mutations(tree, config.params, rng);
                auto report = sfsstats::sfs_from_marked_tree(marked);
                r_ge2 = report.r_ge2_total();
                m_ge2 = report.m_ge2_total();
                break;
            }
            case Mode::approx: {
                long count = approx::approx_r_ge2(config.params, frame, rng);
                r_ge2 = count;
                // Mutations are Poisson(nu) per counted event.
                m_ge2 = with_mutations ? rng.poisson(config.params.nu * count) : 0;
                break;
            }
            default:
                throw std::invalid_argument("run_clt: mode must be coalescent or approx");
        }
        zr.push_back((r_ge2 - config.n * limits.mean_r) / sqrt_n);
        if (with_mutations) zm.push_back((m_ge2 - config.n * limits.mean_m) / sqrt_n);
    }

    auto make_pair_reports = [&](const std::string& tag, const std::vector<double>& z,
                                 double var_target) {
        std::vector<TestReport> out;
        double sd = std::sqrt(var_target);
        auto ks = stats::ks_test(z, [&](double x) { return stats::normal_cdf(x, 0.0, sd); });
        TestReport ks_report;
        ks_report.experiment = "clt_" + tag + "_ks";
        ks_report.statistic = ks.distance;
        ks_report.p_value = ks.p_value;
        ks_report.estimate = ks.distance;
        ks_report.target = 0.0;
        ks_report.reps_used = config.reps;
        ks_report.seed = config.seed;
        ks_report.passed = ks.p_value > 0.01;
        out.push_back(ks_report);

        stats::RunningStat s;
        for (double v : z) s.add(v);
        TestReport var_report;
        var_report.experiment = "clt_" + tag + "_var";
        var_report.target = var_target;
        var_report.estimate = s.variance();
        var_report.mc_stderr = s.variance() * std::sqrt(2.0 / (config.reps - 1));
        var_report.statistic = (var_report.estimate - var_target) / var_report.mc_stderr;
        var_report.p_value = two_sided_normal_p(var_report.statistic);
        var_report.reps_used = config.reps;
        var_report.seed = config.seed;
        var_report.passed = std::fabs(var_report.estimate - var_target) <= 0.1 * var_target;
        out.push_back(var_report);
        return out;
    };

    std::vector<TestReport> reports = make_pair_reports("r", zr, limits.var_r);
    if (with_mutations) {
        auto m_reports = make_pair_reports("m", zm, limits.var_m);
        reports.insert(reports.end(), m_reports.begin(), m_reports.end());
    }
    return reports;
}

TestReport run_oracle_compare(const ExperimentConfig& config) {
    require_reps(config);
    if (config.n != 2 && config.n != 3)
        throw std::invalid_argument("run_oracle_compare: n must be 2 or 3");
    double T = config.t_rule.resolve(config.n, config.params.r());
    SamplingFrame frame(config.n, T);

    auto key_of = [](long r, long m) {
        return static_cast<std::int64_t>(r) * 100000 + std::min(m, 99999L);
    };

    std::map<std::int64_t, long> forward_hist, backward_hist;
    for (long rep = 0; rep < config.reps; ++rep) {
        Rng rng(config.seed, static_cast<std::uint64_t>(rep));
        auto [genealogy, sample] = forward::conditioned_forward(config.params, frame, rng);
        auto report = forward::sfs_from_genealogy(genealogy, sample, config.n);
        ++forward_hist[key_of(report.r_ge2_total(), report.m_ge2_total())];
    }
    for (long rep = 0; rep < config.reps; ++rep) {
        Rng rng(config.seed ^ 0x5bd1e995ULL, static_cast<std::uint64_t>(rep));
        auto tree = coalescent::sample_tree(config.params, frame, rng);
        auto marked = coalescent::place_mutations(tree, config.params, rng);
        auto report = sfsstats::sfs_from_marked_tree(marked);
        ++backward_hist[key_of(report.r_ge2_total(), report.m_ge2_total())];
    }

    auto chi2 = stats::chi2_two_sample(forward_hist, backward_hist);
    TestReport report;
    report.experiment = "oracle_n" + std::to_string(config.n);
    report.statistic = chi2.statistic;
    report.p_value = chi2.p_value;
    report.estimate = chi2.statistic;
    report.target = static_cast<double>(chi2.dof);
    report.reps_used = config.reps;
    report.seed = config.seed;
    report.passed = chi2.p_value > 0.01;
    return report;
}

std::vector<TestReport> run_contour_compare(const ExperimentConfig& config) {
    require_reps(config);
    double T = config.t_rule.resolve(config.n, config.params.r());
    double rT = config.params.r() * T;

    std::map<std::int64_t, long> forward_hist, contour_hist;
    stats::RunningStat mean_forward;
    std::vector<long> tail_ge(8, 0);  // tail_ge[k] = #{N_T >= k} from contour
    for (long rep = 0; rep < config.reps; ++rep) {
        Rng rng(config.seed, static_cast<std::uint64_t>(rep));
        auto genealogy = forward::simulate_forward(config.params, T, rng);
        long n_t = 0;
        for (const auto& ind : genealogy.individuals)
            if (!ind.death_time.has_value()) ++n_t;
        ++forward_hist[n_t];
        mean_forward.add(static_cast<double>(n_t));
    }
    for (long rep = 0; rep < config.reps; ++rep) {
        Rng rng(config.seed ^ 0x2545f4914f6cdd1dULL, static_cast<std::uint64_t>(rep));
        auto path = contour::simulate_contour(config.params, T, rng);
        long n_t = contour::contour_population_at_T(path);
        ++contour_hist[n_t];
        for (std::size_t k = 0; k < tail_ge.size(); ++k)
            if (n_t >= static_cast<long>(k)) ++tail_ge[k];
    }

    std::vector<TestReport> reports;

    auto chi2 = stats::chi2_two_sample(forward_hist, contour_hist);
    TestReport dist_report;
    dist_report.experiment = "contour_vs_forward_chi2";
    dist_report.statistic = chi2.statistic;
    dist_report.p_value = chi2.p_value;
    dist_report.estimate = chi2.statistic;
    dist_report.target = static_cast<double>(chi2.dof);
    dist_report.reps_used = config.reps;
    dist_report.seed = config.seed;
    dist_report.passed = chi2.p_value > 0.01;
    reports.push_back(dist_report);

    // Geometric conditional ratios P(N >= k+1 | N >= k) = 1 - delta_T, k >= 1.
    double ratio_target = 1.0 - bdmath::delta(config.params, T);
    for (int k = 1; k <= 5; ++k) {
        double denom = static_cast<double>(tail_ge[k]);
        if (denom < 100) break;
        double p_hat = tail_ge[k + 1] / denom;
        double se = std::sqrt(p_hat * (1.0 - p_hat) / denom);
        TestReport r;
        r.experiment = "contour_geom_ratio_k" + std::to_string(k);
        r.target = ratio_target;
        r.estimate = p_hat;
        r.mc_stderr = se;
        r.statistic = (p_hat - ratio_target) / se;
        r.p_value = two_sided_normal_p(r.statistic);
        r.reps_used = tail_ge[k];
        r.seed = config.seed;
        r.passed = std::fabs(p_hat - ratio_target) <= 3.0 * se;
        reports.push_back(r);
    }

    TestReport mean_report;
    mean_report.experiment = "forward_mean_NT";
    mean_report.target = std::exp(rT);
    mean_report.estimate = mean_forward.mean();
    mean_report.mc_stderr = mean_forward.stderr_mean();
    mean_report.statistic = (mean_report.estimate - mean_report.target) / mean_report.mc_stderr;
    mean_report.p_value = two_sided_normal_p(mean_report.statistic);
    mean_report.reps_used = config.reps;
    mean_report.seed = config.seed;
    mean_report.passed =
        std::fabs(mean_report.estimate - mean_report.target) <= 0.02 * mean_report.target;
    reports.push_back(mean_report);
    return reports;
}

namespace {

double sigma(double s) { return 1.0 / (1.0 + std::exp(-s)); }

TestReport moment_report(const std::string& tag, double estimate, double target) {
    TestReport r;
    r.experiment = "moments_" + tag;
    r.estimate = estimate;
    r.target = target;
    r.statistic = std::fabs(estimate - target);
    r.reps_used = 0;
    r.passed = std::fabs(estimate - target) <= 1e-8;
    return r;
}

}  // namespace

std::vector<TestReport> verify_moments(const RateParams& params) {
    double mu = params.mu;
    double r = params.r();
    double lr = params.lambda / r;
    double pi2 = M_PI * M_PI;
    auto g = [&](double s) { return mu + r * sigma(s); };

    // (a) E[blue_i]
    double a_val = integrate([&](double s) { return sigma(s) * (1.0 - sigma(s)) * g(s); },
                             -kInf, kInf) / r;

    // Double integrals over {s2 <= s1}: outer adaptive, inner adaptive.
    auto double_integral = [&](const std::function<double(double, double)>& weight) {
        return integrate(
            [&](double s1) {
                return integrate([&](double s2) { return weight(s1, s2) * g(s2); }, -kInf, s1) *
                       g(s1);
            },
            -kInf, kInf);
    };

    // (b) E[blue_i^2] = 2/r^2 * iint (1-sigma(s1)) sigma(s2) g g + E[blue_i]
    double b_dbl = 2.0 / (r * r) * double_integral([&](double s1, double s2) {
        return (1.0 - sigma(s1)) * sigma(s2);
    });
    double b_val = b_dbl + a_val;

    // (c) Var(R_i): red^2 contributes 1/2, cross red*blue contributes 2a.
    double c_val = 0.5 + 2.0 * a_val + b_val - lr * lr;

    // (d) cross terms with the neighboring branch.
    double d1_val = integrate([&](double s) {
                        double sg = sigma(s);
                        return 0.5 * sg * sg * (1.0 - sg) * g(s);
                    }, -kInf, kInf) / r;
    double d2_val = integrate([&](double s) {
                        double sg = sigma(s);
                        return 0.5 * sg * (1.0 - sg) * (1.0 - sg) * g(s);
                    }, -kInf, kInf) / r;

    // (e) E[blue_i blue_{i+1}]
    double e_val = 1.0 / (r * r) * double_integral([&](double s1, double s2) {
        return (1.0 - sigma(s1)) * (sigma(s1) - sigma(s2)) * sigma(s2);
    });

    // (f) Cov(R_i, R_{i+1}); E[red_i red_{i+1}] = 1/6.
    double f_val = 1.0 / 6.0 + d1_val + d2_val + e_val - lr * lr;

    // (g) combined per-branch variance Var + 2 Cov.
    double g_val = c_val + 2.0 * f_val;

    std::vector<TestReport> reports;
    reports.push_back(moment_report("a_blue_mean", a_val, mu / r + 0.5));
    reports.push_back(moment_report(
        "b_blue_second_moment", b_val,
        2.0 / (r * r) * (pi2 / 6.0 * mu * mu + pi2 / 6.0 * mu * r + 0.5 * r * r) + mu / r + 0.5));
    reports.push_back(moment_report(
        "c_var_limit", c_val,
        (pi2 / 3.0 - 1.0) * mu * mu / (r * r) + (pi2 / 3.0 + 1.0) * mu / r + 2.0));
    reports.push_back(moment_report("d_red_blue_cross", d1_val, mu / (4.0 * r) + 1.0 / 6.0));
    reports.push_back(moment_report("d_blue_red_cross", d2_val, mu / (4.0 * r) + 1.0 / 12.0));
    reports.push_back(moment_report(
        "e_blue_product", e_val,
        1.0 / (r * r) *
            ((2.0 - pi2 / 6.0) * mu * mu + (2.0 - pi2 / 6.0) * mu * r + r * r / 12.0)));
    reports.push_back(moment_report(
        "f_cov_limit", f_val,
        (1.0 - pi2 / 6.0) * mu * mu / (r * r) + (0.5 - pi2 / 6.0) * mu / r - 0.5));
    reports.push_back(moment_report("g_combined_variance", g_val, lr * lr));
    return reports;
}

TestReport verify_calculus_identity(int m, int n) {
    if (m < 0 || m > n - 2)
        throw std::invalid_argument("verify_calculus_identity: need 0 <= m <= n-2");

    // Stable log(1+e^s).
    auto lse = [](double s) { return s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s)); };
    double i_logistic = integrate(
        [&](double s) { return std::exp((m + 1) * s - n * lse(s)); }, -kInf, kInf);
    double i_rational = integrate(
        [&](double x) { return std::pow(x, m) * std::exp(-n * std::log1p(x)); }, 0.0, kInf);

    double sum = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= m; ++k) {
        double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binom / (n - k - 1);
        binom = binom * (m - k) / (k + 1);
    }

    TestReport report;
    report.experiment = "identity_m" + std::to_string(m) + "_n" + std::to_string(n);
    report.target = sum;
    report.estimate = i_logistic;
    report.statistic = std::max(std::fabs(i_logistic - sum), std::fabs(i_rational - sum));
    report.passed = report.statistic <= 1e-10;
    return report;
}

std::string reports_to_csv(const std::vector<TestReport>& reports) {
    std::ostringstream out;
    out.precision(12);
    out << "experiment,statistic,estimate,target,stderr,p_value,reps,seed\n";
    for (const auto& r : reports) {
        out << r.experiment << ',' << r.statistic << ',' << r.estimate << ',' << r.target << ','
            << r.mc_stderr << ',' << r.p_value << ',' << r.reps_used << ',' << r.seed << '\n';
    }
    return out.str();
}

std::string reports_to_json(const std::vector<TestReport>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["experiment"] = r.experiment;
        j["statistic"] = r.statistic;
        j["estimate"] = r.estimate;
        j["target"] = r.target;
        j["stderr"] = r.mc_stderr;
        j["p_value"] = r.p_value;
        j["reps"] = r.reps_used;
        j["seed"] = r.seed;
        j["passed"] = r.passed;
        arr.push_back(std::move(j));
    }
    return arr.dump(2);
}

}  // namespace bdsfs::harness
