#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdsfs/params.hpp"
#include "bdsfs/rng.hpp"
#include "bdsfs/sfsstats.hpp"

namespace bdsfs::forward {

struct EventCapExceeded : std::runtime_error {
    EventCapExceeded() : std::runtime_error("forward: event cap exceeded") {}
};
struct RejectionBudgetExceeded : std::runtime_error {
    RejectionBudgetExceeded()
        : std::runtime_error("forward: rejection budget exceeded (P(N_T >= n) too small)") {}
};

struct Individual {
    int id;
    int parent;                   // -1 for the root
    double birth_time;
    std::optional<double> death_time;  // absent if alive at T
    std::vector<std::uint64_t> mutations;  // acquired at own birth; infinite-sites ids
};

struct Genealogy {
    double T;
    std::vector<Individual> individuals;  // parent ids precede child ids
    std::uint64_t next_mutation_id = 0;

    bool alive_at_T(int id) const { return !individuals[id].death_time.has_value(); }
};

struct SampleIds {
    std::vector<int> ids;  // distinct, all alive at T
};

struct SimConfig {
    std::uint64_t event_cap = 10'000'000;
    long rejection_budget = 100'000;
};

// Exact Gillespie trajectory of the birth-death process up to time T (or
// extinction). Children acquire Poisson(nu) fresh mutations at birth.
Genealogy simulate_forward(const RateParams& params, double T, Rng& rng,
                           const SimConfig& config = {});

// Resimulates until N_T >= n, then samples n ids uniformly without
// replacement from the individuals alive at T.
std::pair<Genealogy, SampleIds> conditioned_forward(const RateParams& params,
                                                    const SamplingFrame& frame, Rng& rng,
                                                    const SimConfig& config = {});

// Site frequency spectrum of the sample: for every birth event, the number k
// of sampled individuals in the clade rooted at the child (the child counts
// when sampled). Single post-order pass.
sfsstats::SfsReport sfs_from_genealogy(const Genealogy& genealogy, const SampleIds& sample,
                                       int n);

// JSON export: {T, individuals:[{id, parent, birth, death, mutations:[...]}]}
// with stable field order.
std::string to_json(const Genealogy& genealogy);

}  // namespace bdsfs::forward
