#pragma once

#include <utility>
#include <vector>

#include "bnn/sim/config.hpp"
#include "bnn/sim/trace.hpp"

namespace bnn::sim {

enum class EventKind { arrive, conj_start, conj_success, conj_failure, delivery };

struct EventRecord {
    double time;
    EventKind kind;
    int agent; // legitimate: [0, n_legit), malicious: [n_legit, n_legit + n_malicious)
    int slot;  // cluster bacterium index, -1 where not applicable
};

struct SimResult {
    ArrivalTrace trace;
    SimulationSummary summary;
};

// Deterministic: identical config (seed included) gives bit-identical output.
SimResult simulate(const ScenarioConfig& config);

// Same simulation, also returning the full event log for auditing.
std::pair<SimResult, std::vector<EventRecord>> simulate_logged(const ScenarioConfig& config);

} // namespace bnn::sim
