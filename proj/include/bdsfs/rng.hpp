#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace bdsfs {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded random stream with the inverse-transform samplers the simulators
// need. Replicate substreams are derived deterministically from
// (master seed, stream index), so replicate i is reproducible regardless of
// how many workers ran before it.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (stream + 1));
        gen_.seed(splitmix64(s));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on the open interval (0,1); safe to pass to log().
    double u01() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        return -std::log(u01()) / rate;
    }

    double logistic() {
        double u = u01();
        return std::log(u / (1.0 - u));
    }

    double normal() {
        // Marsaglia polar method; second deviate discarded for simplicity.
        double u, v, s;
        do {
            u = 2.0 * u01() - 1.0;
            v = 2.0 * u01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        return u * std::sqrt(-2.0 * std::log(s) / s);
    }

    // Knuth's multiplication method for small means; Hormann's PTRS
    // transformed rejection for large ones (the product method underflows
    // once mean exceeds ~700).
    long poisson(double mean) {
        if (mean < 0.0) throw std::invalid_argument("poisson: mean must be >= 0");
        if (mean == 0.0) return 0;
        if (mean >= 10.0) return poisson_ptrs(mean);
        double limit = std::exp(-mean);
        long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= u01();
        } while (p > limit);
        return k - 1;
    }

    // Uniform integer in [0, n), unbiased.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be > 0");
        std::uint64_t threshold = (-n) % n;
        for (;;) {
            std::uint64_t x = gen_();
            if (x >= threshold) return x % n;
        }
    }

private:
    long poisson_ptrs(double mean) {
        double log_mean = std::log(mean);
        double b = 0.931 + 2.53 * std::sqrt(mean);
        double a = -0.059 + 0.02483 * b;
        double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = u01() - 0.5;
            double v = u01();
            double us = 0.5 - std::fabs(u);
            double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                kf * log_mean - mean - std::lgamma(kf + 1.0))
                return static_cast<long>(kf);
        }
    }

    std::mt19937_64 gen_;
};

}  // namespace bdsfs
