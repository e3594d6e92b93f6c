#include "bdsfs/coalescent.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bdsfs/bdmath.hpp"

namespace bdsfs::coalescent {

CoalescentTree sample_tree(const RateParams& params, const SamplingFrame& frame, Rng& rng) {
    CoalescentTree tree;
    tree.T = frame.T;
    tree.n = frame.n;
    tree.y = bdmath::sample_y(params, frame, rng);
    tree.heights.resize(frame.n);
    tree.heights[0] = frame.T;
    for (int i = 1; i < frame.n; ++i)
        tree.heights[i] = bdmath::sample_h(params, frame.T, tree.y, rng);
    return tree;
}

std::vector<int> topology_from_heights(const CoalescentTree& tree) {
    const auto& h = tree.heights;
    {
        std::vector<double> sorted(h);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw HeightTie();
    }
    std::vector<int> parent(h.size(), -1);
    std::vector<int> stack = {0};  // indices with strictly decreasing heights
    for (int i = 1; i < static_cast<int>(h.size()); ++i) {
        while (h[stack.back()] < h[i]) stack.pop_back();
        parent[i] = stack.back();
        stack.push_back(i);
    }
    return parent;
}

MarkedTree place_mutations(const CoalescentTree& tree, const RateParams& params, Rng& rng) {
    MarkedTree marked;
    marked.tree = tree;
    for (int i = 0; i < tree.n; ++i) {
        double h = tree.heights[i];
        // Thin a rate-lambda homogeneous process on (0, h): acceptance q(y,t).
        long proposals = rng.poisson(params.lambda * h);
        for (long p = 0; p < proposals; ++p) {
            double t = rng.u01() * h;
            if (rng.u01() < bdmath::q_prob(params, tree.y, t))
                marked.events.push_back({i, t, Color::blue, rng.poisson(params.nu)});
        }
        if (i >= 1)
            marked.events.push_back({i, h, Color::red, rng.poisson(params.nu)});
    }
    return marked;
}

int descendants_of_event(const CoalescentTree& tree, int branch, double t) {
    int k = 1;
    while (branch + k < tree.n && tree.heights[branch + k] <= t) ++k;
    return k;
}

std::string to_json(const MarkedTree& marked) {
    nlohmann::ordered_json j;
    j["T"] = marked.tree.T;
    j["n"] = marked.tree.n;
    j["y"] = marked.tree.y;
    j["heights"] = marked.tree.heights;
    j["events"] = nlohmann::ordered_json::array();
    for (const auto& e : marked.events) {
        nlohmann::ordered_json je;
        je["branch"] = e.branch;
        je["t"] = e.t;
        je["color"] = e.color == Color::red ? "red" : "blue";
        je["mult"] = e.multiplicity;
        j["events"].push_back(std::move(je));
    }
    return j.dump(2);
}

namespace {

// Leaves attaching to branch i strictly below height `top`, highest first.
void newick_subtree(const MarkedTree& marked, const std::vector<std::vector<int>>& children,
                    const std::vector<long>& branch_mult, int i, double top,
                    std::ostringstream& out) {
    const auto& h = marked.tree.heights;
    int best = -1;
    for (int c : children[i])
        if (h[c] < top && (best < 0 || h[c] > h[best])) best = c;
    if (best < 0) {
        out << i << "[&mut=" << branch_mult[i] << "]:" << top;
        return;
    }
    out << '(';
    newick_subtree(marked, children, branch_mult, i, h[best], out);
    out << ',';
    newick_subtree(marked, children, branch_mult, best, h[best], out);
    out << "):" << top - h[best];
}

}  // namespace

std::string to_newick(const MarkedTree& marked) {
    auto parent = topology_from_heights(marked.tree);
    std::vector<std::vector<int>> children(marked.tree.n);
    for (int i = 1; i < marked.tree.n; ++i) children[parent[i]].push_back(i);
    std::vector<long> branch_mult(marked.tree.n, 0);
    for (const auto& e : marked.events) branch_mult[e.branch] += e.multiplicity;
    std::ostringstream out;
    out.precision(17);
    newick_subtree(marked, children, branch_mult, 0, marked.tree.T, out);
    out << ';';
    return out.str();
}

}  // namespace bdsfs::coalescent
