#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bdsfs/params.hpp"
#include "bdsfs/rng.hpp"

namespace bdsfs::coalescent {

struct HeightTie : std::runtime_error {
    HeightTie() : std::runtime_error("coalescent: exact height tie (RNG misuse?)") {}
};

// Branch lengths of the sampled coalescent tree; heights[0] = T, the others
// are the coalescent times, measured backwards from sampling.
struct CoalescentTree {
    double T;
    int n;
    double y;  // realized sampling probability Y_{n,T}
    std::vector<double> heights;  // H_0..H_{n-1}
};

enum class Color { red, blue };

struct MutationEvent {
    int branch;       // 0..n-1
    double t;         // time before sampling; blue: in (0, H_branch), red: = H_branch
    Color color;
    long multiplicity;  // Poisson(nu) draw, may be 0
};

struct MarkedTree {
    CoalescentTree tree;
    std::vector<MutationEvent> events;
};

// Backward construction: y from the Y density, then H_1..H_{n-1} i.i.d. given y.
CoalescentTree sample_tree(const RateParams& params, const SamplingFrame& frame, Rng& rng);

// Leftward-attachment rule: parent(i) = max{ j < i : H_j > H_i }. Entry 0 is
// -1 (root branch). Throws HeightTie on exact ties.
std::vector<int> topology_from_heights(const CoalescentTree& tree);

// Red events at each coalescent time; blue events by thinning a rate-lambda
// homogeneous process with acceptance q(y,t). Every event gets an independent
// Poisson(nu) multiplicity.
MarkedTree place_mutations(const CoalescentTree& tree, const RateParams& params, Rng& rng);

// Number of sampled leaves supported by an event on branch i at time t:
// k = min{ j >= 1 : i+j = n or H_{i+j} > t }.
int descendants_of_event(const CoalescentTree& tree, int branch, double t);

// JSON export {T, n, y, heights:[...], events:[{branch,t,color,mult}]}.
std::string to_json(const MarkedTree& marked);

// Newick topology with branch lengths, mutation multiplicities as comments.
std::string to_newick(const MarkedTree& marked);

}  // namespace bdsfs::coalescent
