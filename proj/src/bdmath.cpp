#include "bdsfs/bdmath.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace bdsfs::bdmath {

namespace {

void require_finite_time(double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::invalid_argument("time must be finite and >= 0");
}

// Clamp a value that is a probability up to rounding. Anything further than
// 1e-12 outside [0,1] is a real bug, not roundoff.
double clamp01(double p) {
    assert(p > -1e-12 && p < 1.0 + 1e-12);
    if (p < 0.0) return 0.0;
    if (p > 1.0) return 1.0;
    return p;
}

}  // namespace

double log_delta(const RateParams& params, double t) {
    require_finite_time(t);
    double r = params.r();
    // log(lambda e^{rt} - mu) = rt + log(lambda) + log1p(-(mu/lambda) e^{-rt})
    double log_denom = r * t + std::log(params.lambda)
                       + std::log1p(-(params.mu / params.lambda) * std::exp(-r * t));
    return std::log(r) - log_denom;
}

double delta(const RateParams& params, double t) {
    return std::exp(log_delta(params, t));
}

double survival_prob(const RateParams& params, double t) {
    require_finite_time(t);
    double r = params.r();
    return clamp01(r / (params.lambda - params.mu * std::exp(-r * t)));
}

double q_prob(const RateParams& params, double y, double t) {
    if (!(y >= 0.0 && y <= 1.0))
        throw std::invalid_argument("q_prob: y must lie in [0,1]");
    require_finite_time(t);
    double d = delta(params, t);
    double g = survival_prob(params, t);  // delta_t e^{rt}
    double q = 1.0 - g + g * d * (1.0 - y) / (d + y - y * d);
    return clamp01(q);
}

double y_cdf(const RateParams& params, const SamplingFrame& frame, double y) {
    if (!(y > 0.0 && y <= 1.0))
        throw std::invalid_argument("y_cdf: y must lie in (0,1]");
    double a = delta(params, frame.T);
    double base = y / ((1.0 - a) * y + a);
    return clamp01(std::exp(frame.n * std::log(base)));
}

double y_quantile(const RateParams& params, const SamplingFrame& frame, double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("y_quantile: u must lie in (0,1)");
    double a = delta(params, frame.T);
    double v = std::exp(std::log(u) / frame.n);
    // 1 - (1-a) v computed as (1-v) + a v to keep precision when v ~ 1.
    double denom = -std::expm1(std::log(u) / frame.n) + a * v;
    return a * v / denom;
}

double sample_y(const RateParams& params, const SamplingFrame& frame, Rng& rng) {
    return y_quantile(params, frame, rng.u01());
}

namespace {

// Normalizer of the H density: C = (b + c e^{-rT}) / (b (1 - e^{-rT}))
// with b = y*lambda, c = r - y*lambda.
double h_norm(double b, double c, double r, double T) {
    double emrT = std::exp(-r * T);
    return (b + c * emrT) / (b * (1.0 - emrT));
}

bool near_degenerate(double c, double r) { return std::fabs(c) < 1e-9 * r; }

}  // namespace

double h_density(const RateParams& params, double T, double y, double t) {
    if (!(y > 0.0 && y <= 1.0))
        throw std::invalid_argument("h_density: y must lie in (0,1]");
    if (!(t > 0.0 && t < T)) return 0.0;
    double r = params.r();
    double b = y * params.lambda;
    double c = r - b;
    double emrt = std::exp(-r * t);
    return h_norm(b, c, r, T) * b * r * r * emrt / ((b + c * emrt) * (b + c * emrt));
}

double h_cdf(const RateParams& params, double T, double y, double t) {
    if (!(y > 0.0 && y <= 1.0))
        throw std::invalid_argument("h_cdf: y must lie in (0,1]");
    if (t <= 0.0) return 0.0;
    if (t >= T) return 1.0;
    double r = params.r();
    double b = y * params.lambda;
    double c = r - b;
    if (near_degenerate(c, r)) {
        // y*lambda == r: truncated exponential r e^{-rt} / (1 - e^{-rT}).
        return clamp01(-std::expm1(-r * t) / -std::expm1(-r * T));
    }
    double emrt = std::exp(-r * t);
    double val = h_norm(b, c, r, T) * b * (r / c) * (1.0 / (b + c * emrt) - 1.0 / r);
    return clamp01(val);
}

double h_quantile(const RateParams& params, double T, double y, double u) {
    if (!(y > 0.0 && y <= 1.0))
        throw std::invalid_argument("h_quantile: y must lie in (0,1]");
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("h_quantile: u must lie in (0,1)");
    double r = params.r();
    double b = y * params.lambda;
    double c = r - b;
    if (near_degenerate(c, r)) {
        return -std::log1p(u * std::expm1(-r * T)) / r;
    }
    double K = h_norm(b, c, r, T) * b * r / c;
    double inv = u / K + 1.0 / r;       // = 1 / (b + c e^{-rt})
    double emrt = (1.0 / inv - b) / c;  // solve for e^{-rt}
    return -std::log(emrt) / r;
}

double sample_h(const RateParams& params, double T, double y, Rng& rng) {
    return h_quantile(params, T, y, rng.u01());
}

}  // namespace bdsfs::bdmath
