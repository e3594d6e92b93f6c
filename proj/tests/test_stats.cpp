#include <doctest.h>

#include <cmath>

#include "bdsfs/rng.hpp"
#include "bdsfs/stats.hpp"

using namespace bdsfs;

TEST_CASE("RunningStat matches direct formulas") {
    stats::RunningStat s;
    for (double x : {1.0, 2.0, 4.0, 8.0}) s.add(x);
    CHECK(s.count() == 4);
    CHECK(s.mean() == doctest::Approx(3.75));
    // Unbiased variance of {1,2,4,8}.
    CHECK(s.variance() == doctest::Approx((2.75 * 2.75 + 1.75 * 1.75 + 0.25 * 0.25 + 4.25 * 4.25) / 3.0));
    CHECK(s.stderr_mean() == doctest::Approx(std::sqrt(s.variance() / 4.0)));
}

TEST_CASE("kolmogorov_q: limits and monotonicity") {
    CHECK(stats::kolmogorov_q(1e-8) == doctest::Approx(1.0));
    CHECK(stats::kolmogorov_q(10.0) == doctest::Approx(0.0));
    // Known value: Q(1) = 0.26999967...
    CHECK(stats::kolmogorov_q(1.0) == doctest::Approx(0.2699996717).epsilon(1e-8));
    double prev = 1.0;
    for (double x = 0.05; x < 3.0; x += 0.05) {
        double q = stats::kolmogorov_q(x);
        CHECK(q <= prev + 1e-15);
        prev = q;
    }
}

TEST_CASE("ks: single point at 0.5 vs U(0,1) has distance 1/2") {
    auto unif = [](double x) { return x; };
    CHECK(stats::ks_distance({0.5}, unif) == doctest::Approx(0.5));
    auto res = stats::ks_test({0.5}, unif);
    CHECK(res.distance == doctest::Approx(0.5));
    CHECK(res.p_value > 0.0);
    CHECK(res.p_value < 1.0);
}

TEST_CASE("ks: null calibration against the true CDF") {
    Rng rng(5150);
    std::vector<double> sample(20000);
    for (auto& x : sample) x = rng.u01();
    auto res = stats::ks_test(sample, [](double x) { return x; });
    CHECK(res.p_value > 0.01);
    // Power: uniform sample against a wrong CDF.
    auto bad = stats::ks_test(sample, [](double x) { return x * x; });
    CHECK(bad.p_value < 1e-12);
}

TEST_CASE("chi2_two_sample: null and alternative") {
    Rng rng(99);
    std::map<std::int64_t, long> a, b, c;
    for (int i = 0; i < 50000; ++i) {
        a[rng.poisson(3.0)]++;
        b[rng.poisson(3.0)]++;
        c[rng.poisson(3.6)]++;
    }
    auto null_res = stats::chi2_two_sample(a, b);
    CHECK(null_res.dof >= 1);
    CHECK(null_res.p_value > 0.001);
    auto alt_res = stats::chi2_two_sample(a, c);
    CHECK(alt_res.p_value < 1e-10);
}

TEST_CASE("chi2_two_sample: sparse bins get merged") {
    std::map<std::int64_t, long> a{{0, 1000}, {1, 1000}, {7, 1}};
    std::map<std::int64_t, long> b{{0, 1000}, {1, 1000}, {9, 2}};
    auto res = stats::chi2_two_sample(a, b);
    CHECK(res.dof >= 1);
    CHECK(std::isfinite(res.statistic));
}

TEST_CASE("normal_cdf basics") {
    CHECK(stats::normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(stats::normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-8));
    CHECK(stats::normal_cdf(3.0, 1.0, 2.0) == doctest::Approx(stats::normal_cdf(1.0)));
}

TEST_CASE("rng: determinism and substream separation") {
    Rng a(42), b(42), c(42, 1);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool differs = false;
    Rng a2(42);
    for (int i = 0; i < 100; ++i) differs |= (a2.next_u64() != c.next_u64());
    CHECK(differs);
}

TEST_CASE("rng: marginals (exponential, poisson, uniform_int)") {
    Rng rng(7);
    stats::RunningStat expo, pois;
    std::vector<long> bins(7, 0);
    const int reps = 200000;
    for (int i = 0; i < reps; ++i) {
        expo.add(rng.exponential(2.0));
        pois.add(static_cast<double>(rng.poisson(4.0)));
        bins[rng.uniform_int(7)]++;
    }
    CHECK(std::fabs(expo.mean() - 0.5) < 3 * expo.stderr_mean());
    CHECK(std::fabs(pois.mean() - 4.0) < 3 * pois.stderr_mean());
    CHECK(std::fabs(pois.variance() - 4.0) < 0.1);
    for (long cnt : bins) CHECK(std::fabs(cnt - reps / 7.0) < 4 * std::sqrt(reps / 7.0));
}

TEST_CASE("rng: poisson stays exact at large means") {
    Rng rng(17);
    for (double mean : {15.0, 200.0, 2000.0}) {
        stats::RunningStat s;
        for (int i = 0; i < 50000; ++i) s.add(static_cast<double>(rng.poisson(mean)));
        CHECK(std::fabs(s.mean() - mean) < 4 * s.stderr_mean());
        CHECK(std::fabs(s.variance() - mean) / mean < 0.05);
    }
    // Both regimes agree across the small/large switch point.
    std::map<std::int64_t, long> lo, hi;
    for (int i = 0; i < 100000; ++i) {
        lo[rng.poisson(9.99)]++;
        hi[rng.poisson(10.01)]++;
    }
    CHECK(stats::chi2_two_sample(lo, hi).p_value > 0.001);
}
