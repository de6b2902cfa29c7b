#pragma once

#include <cstdint>
#include <vector>

#include "bnn/sim/config.hpp"
#include "bnn/sim/engine.hpp"

namespace bnn::sim {

// Inclusive integer range written [lower, upper, step], as in the evaluation
// grids: [10, 30, 10] expands to 10, 20, 30.
struct Range {
    int lower = 0;
    int upper = 0;
    int step = 1;

    std::vector<int> values() const; // throws on an empty or ill-formed range
};

struct SweepEntry {
    ScenarioConfig config;
    ArrivalTrace trace;
    SimulationSummary summary;
};

// Cartesian product legit x malicious x seeds, each scenario simulated
// independently; results sorted by (n_legit, n_malicious, seed). `jobs`
// bounds worker threads; ordering is scheduling-independent.
std::vector<SweepEntry> sweep(const ScenarioConfig& base, const Range& legit,
                              const Range& malicious,
                              const std::vector<std::uint64_t>& seeds, int jobs = 1);

} // namespace bnn::sim
