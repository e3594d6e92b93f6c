#include "bdsfs/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bdsfs/bdmath.hpp"

namespace bdsfs::approx {

ApproxDraw sample_approx(const RateParams& params, const SamplingFrame& frame, Rng& rng) {
    if (frame.n < 2) throw std::invalid_argument("sample_approx: n must be >= 2");
    ApproxDraw draw;
    draw.W = rng.exponential(1.0);
    double r = params.r();
    double log_n = std::log(static_cast<double>(frame.n));
    draw.Y = frame.n * bdmath::delta(params, frame.T) / draw.W;
    draw.U.resize(frame.n - 1);
    draw.H.resize(frame.n - 1);
    for (int i = 0; i < frame.n - 1; ++i) {
        draw.U[i] = rng.logistic();
        draw.H[i] = frame.T - (log_n - std::log(draw.W) + draw.U[i]) / r;
    }
    return draw;
}

namespace {

// Thinned blue count on [lo, hi] clipped to [0, T], intensity lambda*q(y,.).
long blue_count(const RateParams& params, double y, double T, double lo, double hi,
                Rng& rng) {
    lo = std::max(lo, 0.0);
    hi = std::min(hi, T);
    if (!(hi > lo)) return 0;
    long proposals = rng.poisson(params.lambda * (hi - lo));
    long accepted = 0;
    for (long p = 0; p < proposals; ++p) {
        double t = lo + rng.u01() * (hi - lo);
        if (rng.u01() < bdmath::q_prob(params, y, t)) ++accepted;
    }
    return accepted;
}

double clamped_y(const ApproxDraw& draw, long* clamped) {
    if (draw.Y > 1.0) {
        if (clamped) ++*clamped;
        return 1.0;
    }
    return draw.Y;
}

}  // namespace

long approx_r_ge2_from(const RateParams& params, const SamplingFrame& frame,
                       const ApproxDraw& draw, Rng& rng, long* clamped) {
    if (frame.n < 3) throw std::invalid_argument("approx_r_ge2: n must be >= 3");
    double y = clamped_y(draw, clamped);
    long total = 0;
    // H[i-1] is branch i; interior branches i = 1..n-2.
    for (int i = 1; i <= frame.n - 2; ++i) {
        double hi_branch = draw.H[i - 1];
        double lo_branch = draw.H[i];
        if (lo_branch <= hi_branch) {
            total += 1;  // red indicator
            total += blue_count(params, y, frame.T, lo_branch, hi_branch, rng);
        }
    }
    return total;
}

long approx_r_ge2(const RateParams& params, const SamplingFrame& frame, Rng& rng,
                  long* clamped) {
    return approx_r_ge2_from(params, frame, sample_approx(params, frame, rng), rng, clamped);
}

long approx_r_k(const RateParams& params, const SamplingFrame& frame, int k, Rng& rng) {
    if (k < 2 || k > frame.n - 1)
        throw std::invalid_argument("approx_r_k: need 2 <= k <= n-1");
    ApproxDraw draw = sample_approx(params, frame, rng);
    double y = clamped_y(draw, nullptr);
    long total = 0;
    for (int i = 1; i <= frame.n - k - 1; ++i) {
        double inner_max = *std::max_element(draw.H.begin() + i, draw.H.begin() + i + k - 1);
        double cap = std::min(draw.H[i - 1], draw.H[i + k - 1]);
        if (inner_max <= draw.H[i - 1] && draw.H[i - 1] <= draw.H[i + k - 1])
            total += 1;  // red indicator
        if (inner_max < cap)
            total += blue_count(params, y, frame.T, inner_max, cap, rng);
    }
    return total;
}

std::vector<double> order_coupling(const std::vector<double>& xs,
                                   const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("order_coupling: length mismatch");
    auto has_ties = [](const std::vector<double>& v) {
        std::vector<double> s(v);
        std::sort(s.begin(), s.end());
        return std::adjacent_find(s.begin(), s.end()) != s.end();
    };
    if (has_ties(xs) || has_ties(ys)) throw DuplicateValues();

    std::vector<double> sorted_ys(ys);
    std::sort(sorted_ys.begin(), sorted_ys.end());
    std::vector<std::size_t> idx(xs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> out(xs.size());
    for (std::size_t rank = 0; rank < idx.size(); ++rank) out[idx[rank]] = sorted_ys[rank];
    return out;
}

}  // namespace bdsfs::approx
