#include "bdsfs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace bdsfs::stats {

namespace {

void kahan_add(double& sum, double& comp, double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

}  // namespace

void RunningStat::add(double x) {
    ++count_;
    kahan_add(sum_, sum_c_, x);
    kahan_add(sumsq_, sumsq_c_, x * x);
}

double RunningStat::mean() const {
    if (count_ == 0) throw std::runtime_error("RunningStat: empty");
    return sum_ / count_;
}

double RunningStat::variance() const {
    if (count_ < 2) throw std::runtime_error("RunningStat: need >= 2 values");
    double m = mean();
    double v = (sumsq_ - count_ * m * m) / (count_ - 1);
    return v > 0.0 ? v : 0.0;
}

double RunningStat::stderr_mean() const {
    return std::sqrt(variance() / count_);
}

double kolmogorov_q(double x) {
    if (x <= 0.0) return 1.0;
    if (x > 8.0) return 0.0;
    if (x < 1.18) {
        // The alternating series converges term-by-term to 1-1+1-... as x->0;
        // use the dual theta representation of the CDF instead.
        double t = std::exp(-M_PI * M_PI / (8.0 * x * x));
        double cdf = std::sqrt(2.0 * M_PI) / x *
                     (t + std::pow(t, 9.0) + std::pow(t, 25.0) + std::pow(t, 49.0));
        return std::min(1.0, std::max(0.0, 1.0 - cdf));
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    double q = 2.0 * sum;
    return std::min(1.0, std::max(0.0, q));
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::size_t n = sample.size();
    double d = ks_distance(std::move(sample), cdf);
    double sn = std::sqrt(static_cast<double>(n));
    // Stephens' small-sample adjustment of the limiting distribution.
    double p = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
    return {d, p};
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(sample.begin(), sample.end());
    std::size_t n = sample.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

Chi2Result chi2_two_sample(const std::map<std::int64_t, long>& a,
                           const std::map<std::int64_t, long>& b,
                           double min_expected) {
    double na = 0, nb = 0;
    std::map<std::int64_t, std::pair<long, long>> bins;
    for (auto& [k, c] : a) { bins[k].first += c; na += c; }
    for (auto& [k, c] : b) { bins[k].second += c; nb += c; }
    if (na == 0 || nb == 0) throw std::invalid_argument("chi2: empty sample");

    // Merge sparse bins (pooled expectation below threshold) into the next bin.
    std::vector<std::pair<long, long>> merged;
    std::pair<long, long> acc{0, 0};
    double scale_a = na / (na + nb), scale_b = nb / (na + nb);
    for (auto& [k, c] : bins) {
        acc.first += c.first;
        acc.second += c.second;
        double pooled = acc.first + acc.second;
        if (pooled * scale_a >= min_expected && pooled * scale_b >= min_expected) {
            merged.push_back(acc);
            acc = {0, 0};
        }
    }
    if (acc.first + acc.second > 0) {
        if (!merged.empty()) {
            merged.back().first += acc.first;
            merged.back().second += acc.second;
        } else {
            merged.push_back(acc);
        }
    }
    if (merged.size() < 2)
        throw std::invalid_argument("chi2: fewer than two usable bins");

    double stat = 0.0;
    for (auto& [ca, cb] : merged) {
        double pooled = ca + cb;
        double ea = pooled * scale_a;
        double eb = pooled * scale_b;
        stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
    }
    int dof = static_cast<int>(merged.size()) - 1;
    boost::math::chi_squared dist(dof);
    double p = boost::math::cdf(boost::math::complement(dist, stat));
    return {stat, dof, p};
}

double normal_cdf(double x, double mean, double sd) {
    return 0.5 * std::erfc(-(x - mean) / (sd * std::sqrt(2.0)));
}

}  // namespace bdsfs::stats
