#pragma once

#include <string>
#include <vector>

#include "bdsfs/forward.hpp"
#include "bdsfs/params.hpp"
#include "bdsfs/rng.hpp"

namespace bdsfs::contour {

// Depth-first contour of the truncated genealogical tree: drift -1, jumps of
// size min{T - level, Exp(mu)} at Poisson(lambda) exposure times, absorbed at
// the first hit of 0. Levels equal to T are recorded by construction (a
// truncated jump sets the level to T exactly).
struct ContourPath {
    double start_level;
    bool start_at_T;              // xi_0 >= T
    double T;
    std::vector<double> jump_times;   // cumulative exposure at each jump
    std::vector<double> jump_sizes;   // applied (possibly truncated) sizes
    std::vector<bool> jump_hits_T;    // jump was truncated, level set to T
};

ContourPath simulate_contour(const RateParams& params, double T, Rng& rng,
                             const forward::SimConfig& config = {});

// Number of times the path attains level exactly T (start included); this is
// N_T of the encoded truncated tree. Jumps + 1 is the total individual count.
long contour_population_at_T(const ContourPath& path);

// CSV dump of (search_length, level) corner points for plotting.
std::string to_csv(const ContourPath& path);

}  // namespace bdsfs::contour
