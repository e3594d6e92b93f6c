#include "bdsfs/contour.hpp"

#include <limits>
#include <sstream>

namespace bdsfs::contour {

namespace {

// Lifespan draw; mu = 0 means immortal individuals (pure Yule), which the
// truncation maps to T anyway.
double lifespan(const RateParams& params, Rng& rng) {
    if (params.mu == 0.0) return std::numeric_limits<double>::infinity();
    return rng.exponential(params.mu);
}

}  // namespace

ContourPath simulate_contour(const RateParams& params, double T, Rng& rng,
                             const forward::SimConfig& config) {
    if (!(T > 0.0)) throw std::invalid_argument("simulate_contour: T must be > 0");
    ContourPath path;
    path.T = T;
    double xi0 = lifespan(params, rng);
    path.start_at_T = xi0 >= T;
    path.start_level = path.start_at_T ? T : xi0;

    double level = path.start_level;
    double search = 0.0;
    std::uint64_t events = 0;
    for (;;) {
        double exposure = rng.exponential(params.lambda);
        if (exposure >= level) break;  // the -1 drift reaches 0 first
        if (++events > config.event_cap) throw forward::EventCapExceeded();
        search += exposure;
        level -= exposure;
        double xi = lifespan(params, rng);
        bool truncated = xi >= T - level;
        double size = truncated ? T - level : xi;
        level = truncated ? T : level + size;
        path.jump_times.push_back(search);
        path.jump_sizes.push_back(size);
        path.jump_hits_T.push_back(truncated);
    }
    return path;
}

long contour_population_at_T(const ContourPath& path) {
    long count = path.start_at_T ? 1 : 0;
    for (bool hit : path.jump_hits_T)
        if (hit) ++count;
    return count;
}

std::string to_csv(const ContourPath& path) {
    std::ostringstream out;
    out.precision(17);
    out << "search_length,level\n";
    out << 0.0 << ',' << path.start_level << '\n';
    double level = path.start_level;
    double prev_time = 0.0;
    for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
        level -= path.jump_times[i] - prev_time;
        out << path.jump_times[i] << ',' << level << '\n';
        level += path.jump_sizes[i];
        out << path.jump_times[i] << ',' << level << '\n';
        prev_time = path.jump_times[i];
    }
    out << prev_time + level << ',' << 0.0 << '\n';
    return out.str();
}

}  // namespace bdsfs::contour
