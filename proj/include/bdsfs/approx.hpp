#pragma once

#include <stdexcept>
#include <vector>

#include "bdsfs/params.hpp"
#include "bdsfs/rng.hpp"

namespace bdsfs::approx {

struct DuplicateValues : std::runtime_error {
    DuplicateValues() : std::runtime_error("order_coupling: exact ties in input") {}
};

// Large-(n,T) surrogate for (Y, H_1..H_{n-1}): W unit exponential, U_i
// logistic, Y = n delta_T / W, H_i = T - (log n + log(1/W) + U_i)/r.
// Y may exceed 1 and H_i may leave (0,T); consumers clamp/clip.
struct ApproxDraw {
    double W;
    std::vector<double> U;  // size n-1
    double Y;
    std::vector<double> H;  // size n-1, H[i-1] is the ith branch
};

ApproxDraw sample_approx(const RateParams& params, const SamplingFrame& frame, Rng& rng);

// Approximate R^{>=2}: sum over interior branches i = 1..n-2 of the thinned
// blue count on [H_{i+1}, H_i] (clipped to [0,T]) plus 1{H_{i+1} <= H_i}.
// Does not depend on nu. Counts y-clamp occurrences in *clamped if given.
long approx_r_ge2(const RateParams& params, const SamplingFrame& frame, Rng& rng,
                  long* clamped = nullptr);

// Same from a pre-made draw (so R and M statistics can share one draw).
long approx_r_ge2_from(const RateParams& params, const SamplingFrame& frame,
                       const ApproxDraw& draw, Rng& rng, long* clamped = nullptr);

// Approximate R^k: sum over i = 1..n-k-1 with blue counts on
// [max_{i+1..i+k-1} H_j, H_i ^ H_{i+k}] plus the red indicator. Boundary
// branches 0 and n-k are excluded, matching the approximation's own sums.
long approx_r_k(const RateParams& params, const SamplingFrame& frame, int k, Rng& rng);

// Rearranges the sorted values of ys so the result is order-isomorphic to xs.
// Minimizes sum |x_i - y'_i| among permutations of ys.
std::vector<double> order_coupling(const std::vector<double>& xs,
                                   const std::vector<double>& ys);

}  // namespace bdsfs::approx
