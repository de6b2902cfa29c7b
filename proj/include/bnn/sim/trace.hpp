#pragma once

#include <vector>

namespace bnn::sim {

// Per-bin counts of legitimate deliveries at the target, bins[t] covering
// [t * sampling_period, (t+1) * sampling_period).
struct ArrivalTrace {
    std::vector<int> bins;
    double sampling_period = 0.0;
    int n_legit = 0;
};

struct SimulationSummary {
    double retrieved_fraction = 0.0; // distinct fragments delivered / n_fragments
    double retrieval_time = 0.0;     // sim_limit when the file was never completed
    long delivered_total = 0;        // legitimate deliveries, duplicates included
    long malicious_conjugations = 0; // attacker conjugations that succeeded
};

// Aggregate to a coarser sampling period. new_period must be a positive
// multiple of trace.sampling_period and divide the trace's time span.
ArrivalTrace rebin(const ArrivalTrace& trace, double new_period);

} // namespace bnn::sim
