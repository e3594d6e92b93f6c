#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bdsfs/bdmath.hpp"
#include "bdsfs/coalescent.hpp"
#include "bdsfs/forward.hpp"
#include "bdsfs/harness.hpp"
#include "bdsfs/stats.hpp"

using namespace bdsfs;

namespace {
const RateParams kParams(2.0, 1.0, 1.0);

coalescent::CoalescentTree make_tree(double T, std::vector<double> heights, double y = 0.5) {
    coalescent::CoalescentTree tree;
    tree.T = T;
    tree.n = static_cast<int>(heights.size());
    tree.y = y;
    tree.heights = std::move(heights);
    return tree;
}

// Smirnov two-sample KS test (asymptotic p-value).
double ks2_p_value(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    double ne = std::sqrt(double(a.size()) * b.size() / (a.size() + b.size()));
    return stats::kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

// Time before sampling at which the backward lineages of two sampled
// individuals merge: T minus the earlier birth among the first-divergent
// ancestors below the deepest common one.
double pairwise_coalescent_time(const forward::Genealogy& g, int id_a, int id_b) {
    auto path_to_root = [&](int id) {
        std::vector<int> path;
        for (int cur = id; cur >= 0; cur = g.individuals[cur].parent) path.push_back(cur);
        std::reverse(path.begin(), path.end());
        return path;
    };
    auto pa = path_to_root(id_a), pb = path_to_root(id_b);
    size_t i = 0;
    while (i < pa.size() && i < pb.size() && pa[i] == pb[i]) ++i;
    double split = g.T;
    if (i < pa.size()) split = std::min(split, g.individuals[pa[i]].birth_time);
    if (i < pb.size()) split = std::min(split, g.individuals[pb[i]].birth_time);
    return g.T - split;
}
}  // namespace

TEST_CASE("coalescent: a single-leaf tree is just the root branch") {
    Rng rng(1);
    auto tree = coalescent::sample_tree(kParams, SamplingFrame(1, 2.0), rng);
    CHECK(tree.heights.size() == 1);
    CHECK(tree.heights[0] == 2.0);
    CHECK(coalescent::topology_from_heights(tree) == std::vector<int>{-1});
}

TEST_CASE("topology: leftward attachment on hand-picked heights") {
    // Decreasing heights give a caterpillar.
    auto cat = make_tree(1.0, {1.0, 0.8, 0.6, 0.4});
    CHECK(coalescent::topology_from_heights(cat) == std::vector<int>{-1, 0, 1, 2});

    auto tree = make_tree(1.0, {1.0, 0.9, 0.2, 0.5, 0.1});
    CHECK(coalescent::topology_from_heights(tree) == std::vector<int>{-1, 0, 1, 1, 3});

    // Eight leaves with two size-3 clades hanging off branches 2 and 5;
    // branch 7 attaches to branch 5, the nearest taller branch to its left.
    auto wide = make_tree(7.0, {7.0, 3.5, 4.5, 1.5, 3.0, 5.0, 1.0, 3.51});
    CHECK(coalescent::topology_from_heights(wide) ==
          std::vector<int>{-1, 0, 0, 2, 2, 0, 5, 5});

    auto tied = make_tree(1.0, {1.0, 0.5, 0.5});
    CHECK_THROWS_AS(coalescent::topology_from_heights(tied), coalescent::HeightTie);
}

TEST_CASE("descendants_of_event: scan rule on hand-picked heights") {
    auto tree = make_tree(7.0, {6.5, 1.5, 5.0, 4.0, 1.0, 6.0, 3.0, 0.5, 4.2});
    // Event low on the last branch supports exactly one leaf.
    CHECK(coalescent::descendants_of_event(tree, 8, 0.3) == 1);
    // Event on branch 5 at t = 3.5 covers branches 6 and 7 (heights 3, 0.5)
    // but not 8 (4.2 > 3.5): three leaves.
    CHECK(coalescent::descendants_of_event(tree, 5, 3.5) == 3);
    // The coalescence event at the top of branch 3 covers branch 4 only.
    CHECK(coalescent::descendants_of_event(tree, 3, tree.heights[3]) == 2);
    // Root-branch event above every other height supports the full sample.
    CHECK(coalescent::descendants_of_event(tree, 0, 6.4) == 9);
}

TEST_CASE("descendants_of_event: matches brute-force clade counting") {
    Rng rng(2222);
    for (int rep = 0; rep < 300; ++rep) {
        int n = 2 + static_cast<int>(rng.uniform_int(9));
        std::vector<double> heights{1.0};
        for (int i = 1; i < n; ++i) heights.push_back(rng.u01());
        auto tree = make_tree(1.0, heights);
        auto parents = coalescent::topology_from_heights(tree);
        for (int i = 0; i < n; ++i) {
            double t = rng.u01() * heights[i];
            // Brute force: an event at (i, t) supports leaf j iff every branch
            // strictly between i and j (inclusive of j) has height <= t.
            int count = 1;
            for (int j = i + 1; j < n && tree.heights[j] <= t; ++j) count++;
            CHECK(coalescent::descendants_of_event(tree, i, t) == count);
            (void)parents;
        }
    }
}

TEST_CASE("coalescent: sampled Y and H marginals match their CDFs") {
    Rng rng(314);
    SamplingFrame frame(2, 1.5);
    std::vector<double> ys, hs;
    ys.reserve(100000);
    hs.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
        auto tree = coalescent::sample_tree(kParams, frame, rng);
        ys.push_back(tree.y);
        hs.push_back(tree.heights[1]);
    }
    CHECK(stats::ks_distance(ys, [&](double y) { return bdmath::y_cdf(kParams, frame, y); }) <
          0.006);
    // H_1 unconditionally: mixture over y, so test against the empirical law
    // of the forward pairwise coalescent time instead of a fixed-y CDF below.
    Rng fwd_rng(315);
    std::vector<double> fwd_h;
    for (int i = 0; i < 20000; ++i) {
        auto [g, sample] = forward::conditioned_forward(kParams, frame, fwd_rng);
        fwd_h.push_back(pairwise_coalescent_time(g, sample.ids[0], sample.ids[1]));
    }
    CHECK(ks2_p_value(hs, fwd_h) > 0.01);
}

TEST_CASE("coalescent: conditional H marginal matches h_cdf") {
    Rng rng(316);
    const double T = 1.5, y = 0.2;
    std::vector<double> hs(100000);
    for (auto& h : hs) h = bdmath::sample_h(kParams, T, y, rng);
    auto res = stats::ks_test(hs, [&](double t) { return bdmath::h_cdf(kParams, T, y, t); });
    CHECK(res.p_value > 0.01);
}

TEST_CASE("mutations: red events sit at coalescent times; zero nu means zero marks") {
    RateParams silent(2.0, 1.0, 0.0);
    Rng rng(8);
    auto tree = coalescent::sample_tree(silent, SamplingFrame(5, 2.0), rng);
    auto marked = coalescent::place_mutations(tree, silent, rng);
    int reds = 0;
    for (const auto& ev : marked.events) {
        CHECK(ev.multiplicity == 0);
        if (ev.color == coalescent::Color::red) {
            reds++;
            CHECK(ev.t == tree.heights[ev.branch]);
            CHECK(ev.branch >= 1);
        } else {
            CHECK(ev.t > 0.0);
            CHECK(ev.t < tree.heights[ev.branch]);
        }
    }
    CHECK(reds == 4);
}

TEST_CASE("mutations: blue intensity on a branch matches the thinned rate") {
    // Fixed tree: root branch H_0 = T plus one branch of height 1.
    const double T = 2.0, y = 0.1;
    auto tree = make_tree(T, {T, 1.0}, y);
    Rng rng(99);
    stats::RunningStat count, low_window;
    const double eps = 0.02;
    for (int i = 0; i < 200000; ++i) {
        auto marked = coalescent::place_mutations(tree, kParams, rng);
        long c = 0, lw = 0;
        for (const auto& ev : marked.events)
            if (ev.branch == 1 && ev.color == coalescent::Color::blue) {
                c++;
                if (ev.t < eps) lw++;
            }
        count.add(static_cast<double>(c));
        low_window.add(static_cast<double>(lw));
    }
    double target = harness::integrate(
        [&](double t) { return kParams.lambda * bdmath::q_prob(kParams, y, t); }, 0.0, 1.0);
    CHECK(std::fabs(count.mean() - target) < 3 * count.stderr_mean());

    // Near sampling the acceptance tends to 1 - y.
    double window_target = harness::integrate(
        [&](double t) { return kParams.lambda * bdmath::q_prob(kParams, y, t); }, 0.0, eps);
    CHECK(std::fabs(window_target / (kParams.lambda * eps) - (1 - y)) < 0.01);
    CHECK(std::fabs(low_window.mean() - window_target) < 3 * low_window.stderr_mean());
}

TEST_CASE("coalescent: exports are well-formed and deterministic") {
    Rng a(17), b(17);
    auto ta = coalescent::sample_tree(kParams, SamplingFrame(4, 1.0), a);
    auto tb = coalescent::sample_tree(kParams, SamplingFrame(4, 1.0), b);
    auto ma = coalescent::place_mutations(ta, kParams, a);
    auto mb = coalescent::place_mutations(tb, kParams, b);
    CHECK(coalescent::to_json(ma) == coalescent::to_json(mb));
    auto newick = coalescent::to_newick(ma);
    CHECK(newick.back() == ';');
    CHECK(std::count(newick.begin(), newick.end(), '(') ==
          std::count(newick.begin(), newick.end(), ')'));
    CHECK(std::count(newick.begin(), newick.end(), ',') == 3);
}
