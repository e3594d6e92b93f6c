#include <doctest.h>

#include <cmath>
#include <map>

#include "bdsfs/bdmath.hpp"
#include "bdsfs/contour.hpp"
#include "bdsfs/stats.hpp"

using namespace bdsfs;

namespace {
const RateParams kParams(2.0, 1.0, 0.0);

long forward_population(const RateParams& params, double T, Rng& rng) {
    auto g = forward::simulate_forward(params, T, rng);
    long alive = 0;
    for (const auto& ind : g.individuals)
        if (!ind.death_time.has_value()) alive++;
    return alive;
}

// Level right before each jump, reconstructed from the corner data.
std::vector<double> levels_before_jumps(const contour::ContourPath& path) {
    std::vector<double> out;
    double level = path.start_level;
    double prev_time = 0.0;
    for (size_t i = 0; i < path.jump_times.size(); ++i) {
        level -= path.jump_times[i] - prev_time;
        out.push_back(level);
        level = path.jump_hits_T[i] ? path.T : level + path.jump_sizes[i];
        prev_time = path.jump_times[i];
    }
    return out;
}
}  // namespace

TEST_CASE("contour: negligible birth rate gives a jump-free descent") {
    RateParams slow(1e-9, 0.0, 0.0);
    Rng rng(3);
    auto path = contour::simulate_contour(slow, 1.0, rng);
    CHECK(path.jump_times.empty());
    CHECK(path.start_at_T);  // mu = 0: the first lifespan is infinite
    CHECK(contour::contour_population_at_T(path) == 1);
}

TEST_CASE("contour: path stays within [0, T] and truncated jumps land on T") {
    Rng rng(44);
    const double T = 1.0;
    for (int i = 0; i < 5000; ++i) {
        auto path = contour::simulate_contour(kParams, T, rng);
        CHECK(path.start_level <= T);
        double level = path.start_level;
        double prev_time = 0.0;
        for (size_t j = 0; j < path.jump_times.size(); ++j) {
            level -= path.jump_times[j] - prev_time;
            CHECK(level > 0.0);  // not yet absorbed
            level = path.jump_hits_T[j] ? T : level + path.jump_sizes[j];
            CHECK(level <= T + 1e-12);
            if (path.jump_hits_T[j]) CHECK(level == T);
            prev_time = path.jump_times[j];
        }
    }
}

TEST_CASE("contour: jump truncation frequency equals e^{-mu h}") {
    // For a jump proposed at level l, the lifespan exceeds h = T - l (so the
    // jump is truncated) with probability e^{-mu h}. Pool jumps with h in a
    // narrow band and compare.
    Rng rng(777);
    const double T = 1.0;
    long in_band = 0, truncated = 0;
    stats::RunningStat target;
    for (int i = 0; i < 60000; ++i) {
        auto path = contour::simulate_contour(kParams, T, rng);
        auto levels = levels_before_jumps(path);
        for (size_t j = 0; j < levels.size(); ++j) {
            double h = T - levels[j];
            if (h >= 0.45 && h <= 0.55) {
                in_band++;
                truncated += path.jump_hits_T[j] ? 1 : 0;
                target.add(std::exp(-kParams.mu * h));
            }
        }
    }
    REQUIRE(in_band > 1000);
    double p = truncated / double(in_band);
    double se = std::sqrt(target.mean() * (1 - target.mean()) / in_band);
    CHECK(std::fabs(p - target.mean()) < 3 * se);
}

TEST_CASE("contour: population count distribution matches the forward process") {
    Rng fwd_rng(10'001), ctr_rng(10'002);
    const double T = 1.0;
    const int reps = 20000;
    std::map<std::int64_t, long> fwd, ctr;
    for (int i = 0; i < reps; ++i) {
        fwd[forward_population(kParams, T, fwd_rng)]++;
        ctr[contour::contour_population_at_T(contour::simulate_contour(kParams, T, ctr_rng))]++;
    }
    auto res = stats::chi2_two_sample(fwd, ctr);
    CHECK(res.p_value > 0.01);
}

TEST_CASE("contour: hand-built path bookkeeping") {
    contour::ContourPath path;
    path.T = 1.0;
    path.start_level = 1.0;
    path.start_at_T = true;
    path.jump_times = {0.3, 0.9};
    path.jump_sizes = {0.3, 0.5};
    path.jump_hits_T = {true, false};
    CHECK(contour::contour_population_at_T(path) == 2);

    path.start_at_T = false;
    path.start_level = 0.8;
    CHECK(contour::contour_population_at_T(path) == 1);

    auto csv = contour::to_csv(path);
    CHECK(!csv.empty());
}
