#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdsfs/params.hpp"

namespace bdsfs::harness {

struct ConditionViolated : std::runtime_error {
    explicit ConditionViolated(const std::string& what) : std::runtime_error(what) {}
};
struct QuadratureNotConverged : std::runtime_error {
    QuadratureNotConverged() : std::runtime_error("quadrature did not reach tolerance") {}
};

enum class Mode { forward, contour, coalescent, approx };

// Sampling-horizon rule: an explicit T, or one of the named defaults
// T = 2 log(n)/r (lln) and T = (2 log n + log log n + 5)/r (clt).
struct TRule {
    enum class Kind { explicit_t, lln, clt } kind = Kind::explicit_t;
    double T = 0.0;

    static TRule explicit_t(double T);
    static TRule named(const std::string& name);  // "lln" or "clt"
    double resolve(int n, double r) const;
};

struct ExperimentConfig {
    RateParams params;
    int n;
    TRule t_rule;
    long reps;
    std::uint64_t seed;
    Mode mode = Mode::coalescent;
    int k = 2;  // frequency class for lln runs
};

struct TestReport {
    std::string experiment;
    double statistic = 0.0;
    double p_value = 1.0;
    double target = 0.0;
    double estimate = 0.0;
    double mc_stderr = 0.0;
    long reps_used = 0;
    std::uint64_t seed = 0;
    bool passed = false;
};

// Mean of R^k/n over replicates vs lambda/(r k (k-1)); passes within 2%.
// Modes: coalescent (exact construction) or approx.
TestReport run_lln(const ExperimentConfig& config);

// Standardized (R^{>=2} - n lambda/r)/sqrt(n) across replicates: KS against
// N(0, lambda^2/r^2) and a variance check (within 10%); with nu > 0, the same
// pair for M^{>=2} against the mutation-CLT constants.
std::vector<TestReport> run_clt(const ExperimentConfig& config);

// Two-sample chi-square of the binned joint (R^{>=2}, M^{>=2}) law:
// forward Gillespie vs backward construction. Requires n in {2,3}.
TestReport run_oracle_compare(const ExperimentConfig& config);

// Contour vs forward: chi-square on the N_T distribution, geometric
// conditional ratios vs 1 - delta_T, and mean N_T vs e^{rT}.
std::vector<TestReport> run_contour_compare(const ExperimentConfig& config);

// Quadrature of the limit moment integrals against the closed forms
// (seven reports, tagged a..g); each must agree to 1e-8.
std::vector<TestReport> verify_moments(const RateParams& params);

// Both integral forms of int_0^inf x^m/(1+x)^n dx vs the alternating binomial
// sum, to 1e-10.
TestReport verify_calculus_identity(int m, int n);

// Report writers; schema (experiment, statistic, estimate, target, stderr,
// p_value, reps, seed).
std::string reports_to_csv(const std::vector<TestReport>& reports);
std::string reports_to_json(const std::vector<TestReport>& reports);

// Adaptive Gauss-Kronrod helpers used by the verification ops (tol 1e-10;
// throws QuadratureNotConverged if the error estimate exceeds 1e-8).
double integrate(const std::function<double(double)>& f, double a, double b);

}  // namespace bdsfs::harness
