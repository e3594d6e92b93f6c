#pragma once

#include <cmath>
#include <stdexcept>

namespace bdsfs {

// Rates of the supercritical birth-death process with mutations at births.
// Requires lambda > mu >= 0 and nu >= 0.
struct RateParams {
    double lambda;  // birth rate
    double mu;      // death rate
    double nu;      // mean mutations per birth event

    RateParams(double lambda_, double mu_, double nu_ = 0.0)
        : lambda(lambda_), mu(mu_), nu(nu_) {
        if (!(std::isfinite(lambda) && std::isfinite(mu) && std::isfinite(nu)))
            throw std::invalid_argument("RateParams: rates must be finite");
        if (!(mu >= 0.0))
            throw std::invalid_argument("RateParams: mu must be >= 0");
        if (!(lambda > mu))
            throw std::invalid_argument("RateParams: supercritical regime requires lambda > mu");
        if (!(nu >= 0.0))
            throw std::invalid_argument("RateParams: nu must be >= 0");
    }

    double r() const { return lambda - mu; }  // net growth rate
};

// Sample size and sampling horizon.
struct SamplingFrame {
    int n;     // sample size, >= 1
    double T;  // sampling time, > 0

    SamplingFrame(int n_, double T_) : n(n_), T(T_) {
        if (n < 1) throw std::invalid_argument("SamplingFrame: n must be >= 1");
        if (!(std::isfinite(T) && T > 0.0))
            throw std::invalid_argument("SamplingFrame: T must be finite and > 0");
    }
};

}  // namespace bdsfs
