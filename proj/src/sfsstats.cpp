#include "bdsfs/sfsstats.hpp"

#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bdsfs/coalescent.hpp"

namespace bdsfs::sfsstats {

long SfsReport::r_ge2() const {
    long s = 0;
    for (int k = 2; k < n; ++k) s += R[k];
    return s;
}

long SfsReport::m_ge2() const {
    long s = 0;
    for (int k = 2; k < n; ++k) s += M[k];
    return s;
}

void SfsReport::record(int k, long multiplicity) {
    if (k < 1 || k > n) throw std::invalid_argument("SfsReport: k out of range");
    if (k == n) {
        r_full += 1;
        m_full += multiplicity;
    } else {
        R[k] += 1;
        M[k] += multiplicity;
    }
}

SfsReport sfs_from_marked_tree(const coalescent::MarkedTree& marked) {
    SfsReport report(marked.tree.n);
    for (const auto& e : marked.events)
        report.record(coalescent::descendants_of_event(marked.tree, e.branch, e.t),
                      e.multiplicity);
    return report;
}

double asymptotic_r_mean(const RateParams& params, int k) {
    if (k < 2) throw std::invalid_argument("asymptotic_r_mean: k must be >= 2");
    double r = params.r();
    return params.lambda / (r * k * (k - 1));
}

CltParams asymptotic_clt_params(const RateParams& params) {
    double r = params.r();
    double lr = params.lambda / r;
    return {lr, lr * lr, lr * params.nu, lr * lr * params.nu * params.nu + lr * params.nu};
}

std::string to_csv(const SfsReport& report) {
    std::ostringstream out;
    out << "k,R_k,M_k\n";
    for (int k = 1; k < report.n; ++k)
        out << k << ',' << report.R[k] << ',' << report.M[k] << '\n';
    out << "ge2," << report.r_ge2() << ',' << report.m_ge2() << '\n';
    out << "full," << report.r_full << ',' << report.m_full << '\n';
    return out.str();
}

std::string to_json(const SfsReport& report) {
    nlohmann::ordered_json j;
    j["n"] = report.n;
    j["R"] = std::vector<long>(report.R.begin() + 1, report.R.begin() + std::max(report.n, 1));
    j["M"] = std::vector<long>(report.M.begin() + 1, report.M.begin() + std::max(report.n, 1));
    j["R_ge2"] = report.r_ge2();
    j["M_ge2"] = report.m_ge2();
    j["R_full"] = report.r_full;
    j["M_full"] = report.m_full;
    return j.dump(2);
}

}  // namespace bdsfs::sfsstats
