// bdsfs: simulate sampled birth-death genealogies three ways, compute site
// frequency spectra, and statistically verify the limit theorems.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdsfs/approx.hpp"
#include "bdsfs/bdmath.hpp"
#include "bdsfs/coalescent.hpp"
#include "bdsfs/contour.hpp"
#include "bdsfs/forward.hpp"
#include "bdsfs/harness.hpp"
#include "bdsfs/sfsstats.hpp"

#include <nlohmann/json.hpp>

namespace {

struct CommonOpts {
    double lambda = 2.0;
    double mu = 1.0;
    double nu = 0.0;
    int n = 3;
    double T = 0.0;
    std::string t_rule;
    int k = 2;
    long reps = 1;
    std::uint64_t seed = 1;
    std::string mode = "coalescent";
    std::string out;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--lambda", opts.lambda, "birth rate");
    cmd->add_option("--mu", opts.mu, "death rate");
    cmd->add_option("--nu", opts.nu, "mean mutations per birth");
    cmd->add_option("--n", opts.n, "sample size");
    auto* t = cmd->add_option("--T", opts.T, "sampling horizon");
    auto* rule = cmd->add_option("--t-rule", opts.t_rule, "horizon rule: lln | clt");
    t->excludes(rule);
    cmd->add_option("--k", opts.k, "frequency class");
    cmd->add_option("--reps", opts.reps, "replicates");
    cmd->add_option("--seed", opts.seed, "master RNG seed");
    cmd->add_option("--mode", opts.mode, "generator: forward|contour|coalescent|approx");
    cmd->add_option("--out", opts.out, "output path (default stdout)");
    cmd->add_option("--format", opts.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

bdsfs::harness::Mode parse_mode(const std::string& mode) {
    if (mode == "forward") return bdsfs::harness::Mode::forward;
    if (mode == "contour") return bdsfs::harness::Mode::contour;
    if (mode == "coalescent") return bdsfs::harness::Mode::coalescent;
    if (mode == "approx") return bdsfs::harness::Mode::approx;
    throw CLI::ValidationError("--mode", "unknown mode '" + mode + "'");
}

bdsfs::harness::ExperimentConfig make_config(const CommonOpts& opts) {
    bdsfs::RateParams params(opts.lambda, opts.mu, opts.nu);
    bdsfs::harness::TRule rule = opts.t_rule.empty()
                                     ? bdsfs::harness::TRule::explicit_t(opts.T)
                                     : bdsfs::harness::TRule::named(opts.t_rule);
    return {params, opts.n, rule, opts.reps, opts.seed, parse_mode(opts.mode), opts.k};
}

int emit_reports(const CommonOpts& opts, const std::vector<bdsfs::harness::TestReport>& reports) {
    write_output(opts.out, opts.format == "json" ? bdsfs::harness::reports_to_json(reports)
                                                 : bdsfs::harness::reports_to_csv(reports));
    for (const auto& r : reports)
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.experiment << '\n';
    bool all_passed = std::all_of(reports.begin(), reports.end(),
                                  [](const auto& r) { return r.passed; });
    return all_passed ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampled birth-death genealogies and their site frequency spectra"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* cmd_forward = app.add_subcommand("forward", "forward Gillespie genealogy (JSON)");
    auto* cmd_contour = app.add_subcommand("contour", "contour path of the truncated tree (CSV)");
    auto* cmd_coalescent =
        app.add_subcommand("coalescent", "backward coalescent tree with mutations (JSON)");
    auto* cmd_approx = app.add_subcommand("approx", "large-(n,T) approximate draw (JSON)");
    auto* cmd_lln = app.add_subcommand("lln", "law-of-large-numbers experiment for R^k/n");
    auto* cmd_clt = app.add_subcommand("clt", "central-limit experiment for R^{>=2} (and M)");
    auto* cmd_oracle =
        app.add_subcommand("oracle", "forward vs backward joint (R^{>=2}, M^{>=2}) comparison");
    auto* cmd_moments = app.add_subcommand("moments", "quadrature checks of the moment limits");
    auto* cmd_identity =
        app.add_subcommand("identity", "quadrature vs binomial-sum calculus identity");
    std::string newick_path;
    cmd_coalescent->add_option("--newick", newick_path, "also write Newick topology here");
    for (auto* cmd : {cmd_forward, cmd_contour, cmd_coalescent, cmd_approx, cmd_lln, cmd_clt,
                      cmd_oracle, cmd_moments, cmd_identity})
        add_common(cmd, opts);

    try {
        app.parse(argc, argv);

        bdsfs::RateParams params(opts.lambda, opts.mu, opts.nu);
        bdsfs::Rng rng(opts.seed);

        if (cmd_forward->parsed()) {
            double T = opts.T > 0.0 ? opts.T : 1.0;
            auto genealogy = bdsfs::forward::simulate_forward(params, T, rng);
            write_output(opts.out, bdsfs::forward::to_json(genealogy));
            return 0;
        }
        if (cmd_contour->parsed()) {
            double T = opts.T > 0.0 ? opts.T : 1.0;
            auto path = bdsfs::contour::simulate_contour(params, T, rng);
            write_output(opts.out, bdsfs::contour::to_csv(path));
            std::cerr << "population at T: " << bdsfs::contour::contour_population_at_T(path)
                      << '\n';
            return 0;
        }
        if (cmd_coalescent->parsed()) {
            double T = opts.T > 0.0 ? opts.T : 1.0;
            bdsfs::SamplingFrame frame(opts.n, T);
            auto tree = bdsfs::coalescent::sample_tree(params, frame, rng);
            auto marked = bdsfs::coalescent::place_mutations(tree, params, rng);
            write_output(opts.out, bdsfs::coalescent::to_json(marked));
            if (!newick_path.empty())
                write_output(newick_path, bdsfs::coalescent::to_newick(marked) + "\n");
            return 0;
        }
        if (cmd_approx->parsed()) {
            double T = opts.T > 0.0
                           ? opts.T
                           : bdsfs::harness::TRule::named(opts.t_rule.empty() ? "clt" : opts.t_rule)
                                 .resolve(opts.n, params.r());
            bdsfs::SamplingFrame frame(opts.n, T);
            auto draw = bdsfs::approx::sample_approx(params, frame, rng);
            nlohmann::ordered_json j;
            j["W"] = draw.W;
            j["Y"] = draw.Y;
            j["U"] = draw.U;
            j["H"] = draw.H;
            write_output(opts.out, j.dump(2));
            return 0;
        }
        if (cmd_lln->parsed()) {
            if (opts.t_rule.empty() && opts.T <= 0.0) opts.t_rule = "lln";
            return emit_reports(opts, {bdsfs::harness::run_lln(make_config(opts))});
        }
        if (cmd_clt->parsed()) {
            if (opts.t_rule.empty() && opts.T <= 0.0) opts.t_rule = "clt";
            return emit_reports(opts, bdsfs::harness::run_clt(make_config(opts)));
        }
        if (cmd_oracle->parsed()) {
            if (opts.T <= 0.0 && opts.t_rule.empty()) opts.T = 1.5;
            return emit_reports(opts, {bdsfs::harness::run_oracle_compare(make_config(opts))});
        }
        if (cmd_moments->parsed()) {
            return emit_reports(opts, bdsfs::harness::verify_moments(params));
        }
        if (cmd_identity->parsed()) {
            int max_n = cmd_identity->count("--n") ? std::max(opts.n, 2) : 12;
            std::vector<bdsfs::harness::TestReport> reports;
            for (int nn = 2; nn <= max_n; ++nn)
                for (int m = 0; m <= nn - 2; ++m)
                    reports.push_back(bdsfs::harness::verify_calculus_identity(m, nn));
            return emit_reports(opts, reports);
        }
        return 1;
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
