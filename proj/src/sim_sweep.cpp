#include "bnn/sim/sweep.hpp"

#include <algorithm>
#include <stdexcept>

#include "bnn/parallel.hpp"

namespace bnn::sim {

std::vector<int> Range::values() const {
    if (step <= 0) throw std::invalid_argument("Range: step must be > 0");
    if (upper < lower) throw std::invalid_argument("Range: empty range (upper < lower)");
    std::vector<int> out;
    for (int v = lower; v <= upper; v += step) out.push_back(v);
    return out;
}

std::vector<SweepEntry> sweep(const ScenarioConfig& base, const Range& legit,
                              const Range& malicious,
                              const std::vector<std::uint64_t>& seeds, int jobs) {
    if (seeds.empty()) throw std::invalid_argument("sweep: seed list must not be empty");
    const auto legit_values = legit.values();
    const auto malicious_values = malicious.values();
    std::vector<std::uint64_t> ordered_seeds = seeds;
    std::sort(ordered_seeds.begin(), ordered_seeds.end());

    std::vector<ScenarioConfig> configs;
    configs.reserve(legit_values.size() * malicious_values.size() * seeds.size());
    for (int nl : legit_values)
        for (int nm : malicious_values)
            for (std::uint64_t seed : ordered_seeds) {
                ScenarioConfig c = base;
                c.n_legit = nl;
                c.n_malicious = nm;
                c.rng_seed = seed;
                c.validate();
                configs.push_back(c);
            }

    std::vector<SweepEntry> out(configs.size());
    parallel_for(configs.size(), jobs, [&](std::size_t i) {
        SimResult r = simulate(configs[i]);
        out[i] = SweepEntry{configs[i], std::move(r.trace), r.summary};
    });
    return out;
}

} // namespace bnn::sim
