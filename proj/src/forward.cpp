#include "bdsfs/forward.hpp"

#include <nlohmann/json.hpp>

namespace bdsfs::forward {

Genealogy simulate_forward(const RateParams& params, double T, Rng& rng,
                           const SimConfig& config) {
    if (!(T > 0.0)) throw std::invalid_argument("simulate_forward: T must be > 0");
    Genealogy g;
    g.T = T;
    g.individuals.push_back({0, -1, 0.0, std::nullopt, {}});

    std::vector<int> alive = {0};
    double t = 0.0;
    std::uint64_t events = 0;
    double total_rate_per_individual = params.lambda + params.mu;

    while (!alive.empty()) {
        double rate = total_rate_per_individual * static_cast<double>(alive.size());
        t += rng.exponential(rate);
        if (t >= T) break;
        if (++events > config.event_cap) throw EventCapExceeded();

        std::size_t pick = static_cast<std::size_t>(rng.uniform_int(alive.size()));
        if (rng.u01() < params.lambda / total_rate_per_individual) {
            int parent = alive[pick];
            int child = static_cast<int>(g.individuals.size());
            Individual ind{child, parent, t, std::nullopt, {}};
            long nmut = rng.poisson(params.nu);
            for (long m = 0; m < nmut; ++m) ind.mutations.push_back(g.next_mutation_id++);
            g.individuals.push_back(std::move(ind));
            alive.push_back(child);
        } else {
            g.individuals[alive[pick]].death_time = t;
            alive[pick] = alive.back();
            alive.pop_back();
        }
    }
    return g;
}

std::pair<Genealogy, SampleIds> conditioned_forward(const RateParams& params,
                                                    const SamplingFrame& frame, Rng& rng,
                                                    const SimConfig& config) {
    for (long attempt = 0; attempt < config.rejection_budget; ++attempt) {
        Genealogy g = simulate_forward(params, frame.T, rng, config);
        std::vector<int> alive;
        for (const auto& ind : g.individuals)
            if (!ind.death_time.has_value()) alive.push_back(ind.id);
        if (static_cast<int>(alive.size()) < frame.n) continue;

        // Uniform without replacement (partial Fisher-Yates).
        SampleIds sample;
        for (int i = 0; i < frame.n; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(alive.size() - i));
            std::swap(alive[i], alive[j]);
            sample.ids.push_back(alive[i]);
        }
        return {std::move(g), std::move(sample)};
    }
    throw RejectionBudgetExceeded();
}

sfsstats::SfsReport sfs_from_genealogy(const Genealogy& genealogy, const SampleIds& sample,
                                       int n) {
    sfsstats::SfsReport report(n);
    std::vector<long> clade_count(genealogy.individuals.size(), 0);
    for (int id : sample.ids) {
        if (genealogy.individuals[id].death_time.has_value())
            throw std::invalid_argument("sfs_from_genealogy: sampled individual not alive at T");
        clade_count[id] += 1;
    }
    // Parent ids precede child ids, so a reverse sweep accumulates subtrees.
    for (std::size_t i = genealogy.individuals.size(); i-- > 1;) {
        clade_count[genealogy.individuals[i].parent] += clade_count[i];
    }
    for (std::size_t i = 1; i < genealogy.individuals.size(); ++i) {
        long k = clade_count[i];
        if (k >= 1)
            report.record(static_cast<int>(k),
                          static_cast<long>(genealogy.individuals[i].mutations.size()));
    }
    return report;
}

std::string to_json(const Genealogy& genealogy) {
    nlohmann::ordered_json j;
    j["T"] = genealogy.T;
    j["individuals"] = nlohmann::ordered_json::array();
    for (const auto& ind : genealogy.individuals) {
        nlohmann::ordered_json ji;
        ji["id"] = ind.id;
        if (ind.parent >= 0)
            ji["parent"] = ind.parent;
        else
            ji["parent"] = nullptr;
        ji["birth"] = ind.birth_time;
        if (ind.death_time.has_value())
            ji["death"] = *ind.death_time;
        else
            ji["death"] = nullptr;
        ji["mutations"] = ind.mutations;
        j["individuals"].push_back(std::move(ji));
    }
    return j.dump(2);
}

}  // namespace bdsfs::forward
