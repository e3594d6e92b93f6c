#pragma once

#include "bdsfs/params.hpp"
#include "bdsfs/rng.hpp"

namespace bdsfs::bdmath {

// delta_t = r / (lambda e^{rt} - mu). Probability that a lineage alive t time
// units before sampling has exactly one survivor line, i.e. the geometric
// parameter of the conditional population size. Strictly decreasing from
// delta_0 = 1. Evaluated in log space so large rt does not overflow.
double delta(const RateParams& params, double t);

// log(delta_t), valid for all t >= 0.
double log_delta(const RateParams& params, double t);

// delta_t e^{rt} = P(N_t > 0); stable for all t.
double survival_prob(const RateParams& params, double t);

// q(y,t) = F_t(1-y): probability that a birth t before sampling leaves no
// descendant in a Bernoulli(y) sample. Requires y in [0,1], t >= 0.
double q_prob(const RateParams& params, double y, double t);

// CDF of the sampling probability Y_{n,T}: (y / ((1-a) y + a))^n with
// a = delta_T.
double y_cdf(const RateParams& params, const SamplingFrame& frame, double y);

// Exact inverse-transform draw from the Y_{n,T} density.
double sample_y(const RateParams& params, const SamplingFrame& frame, Rng& rng);

// Density of the branch length H_{i,n,T} given Y = y, supported on (0,T).
double h_density(const RateParams& params, double T, double y, double t);

// CDF of H_{i,n,T} given Y = y; closed form, h_cdf(T) = 1. Switches to the
// truncated-exponential limit when y*lambda is within 1e-9*r of r.
double h_cdf(const RateParams& params, double T, double y, double t);

// Exact inverse-transform draw from the H density given y.
double sample_h(const RateParams& params, double T, double y, Rng& rng);

// Inverse-CDF helpers exposed so roundtrip tests can drive them with a fixed
// uniform variate.
double y_quantile(const RateParams& params, const SamplingFrame& frame, double u);
double h_quantile(const RateParams& params, double T, double y, double u);

}  // namespace bdsfs::bdmath
