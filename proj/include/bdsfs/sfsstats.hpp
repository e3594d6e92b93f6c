#pragma once

#include <string>
#include <vector>

#include "bdsfs/params.hpp"

namespace bdsfs {
namespace coalescent {
struct MarkedTree;
}

namespace sfsstats {

// Site frequency spectrum of a sample of size n. R[k] / M[k] (1 <= k <= n-1)
// count reproduction events / mutations with exactly k sampled descendants.
// Events supporting all n leaves are not polymorphic in the sample; they are
// tallied separately in r_full / m_full.
struct SfsReport {
    int n = 0;
    std::vector<long> R;  // index 0 unused; valid entries 1..n-1
    std::vector<long> M;
    long r_full = 0;  // diagnostic: events supporting all n leaves
    long m_full = 0;

    explicit SfsReport(int n_ = 0) : n(n_), R(std::max(n_, 1), 0), M(std::max(n_, 1), 0) {}

    long r_ge2() const;
    long m_ge2() const;

    // The aggregates of the asymptotic theory include full-support events
    // (they sit on the 0th branch and have >= 2 descendants).
    long r_ge2_total() const { return r_ge2() + r_full; }
    long m_ge2_total() const { return m_ge2() + m_full; }

    void record(int k, long multiplicity);
};

// SFS of a marked coalescent tree (backward construction).
SfsReport sfs_from_marked_tree(const coalescent::MarkedTree& marked);

// lim E[R^k_{n,T_n}]/n = lambda / (r k (k-1)), k >= 2.
double asymptotic_r_mean(const RateParams& params, int k);

// Per-leaf limits of the aggregate counts.
struct CltParams {
    double mean_r;  // lambda / r
    double var_r;   // lambda^2 / r^2
    double mean_m;  // lambda nu / r
    double var_m;   // lambda^2 nu^2 / r^2 + lambda nu / r
};
CltParams asymptotic_clt_params(const RateParams& params);

// CSV rows (k, R_k, M_k) plus an aggregate row; JSON mirror.
std::string to_csv(const SfsReport& report);
std::string to_json(const SfsReport& report);

}  // namespace sfsstats
}  // namespace bdsfs
