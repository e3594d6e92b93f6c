#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace bdsfs::stats {

// Mean / variance accumulator using compensated (Kahan) summation so the
// reduction is order-independent to rounding.
class RunningStat {
public:
    void add(double x);
    long count() const { return count_; }
    double mean() const;
    double variance() const;  // unbiased
    double stderr_mean() const;

private:
    long count_ = 0;
    double sum_ = 0.0, sum_c_ = 0.0;
    double sumsq_ = 0.0, sumsq_c_ = 0.0;
};

// Kolmogorov limiting distribution Q(x) = 2 sum_{k>=1} (-1)^{k-1} e^{-2k^2x^2};
// the p-value of a large-sample KS statistic.
double kolmogorov_q(double x);

struct KsResult {
    double distance;  // sup |F_emp - F|
    double p_value;   // asymptotic, with the usual small-sample correction
};

// One-sample KS test of `sample` against the CDF `cdf`. Sorts a copy.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf);

// KS distance only.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

struct Chi2Result {
    double statistic;
    int dof;
    double p_value;
};

// Two-sample chi-square homogeneity test on integer-keyed histograms
// (e.g. joint counts encoded as a single key). Bins with pooled expected
// count below `min_expected` are merged into their neighbor.
Chi2Result chi2_two_sample(const std::map<std::int64_t, long>& a,
                           const std::map<std::int64_t, long>& b,
                           double min_expected = 5.0);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

}  // namespace bdsfs::stats
