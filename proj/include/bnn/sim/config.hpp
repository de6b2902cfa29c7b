#pragma once

#include <cstdint>

namespace bnn::sim {

// One simulated read of the archive: legitimate retrievers and malicious
// bacteria travel to a cluster of motility-restricted data bacteria, contend
// for conjugation slots, and deliver plasmids to the target.
struct ScenarioConfig {
    int n_legit = 0;
    int n_malicious = 0;
    int cluster_size = 50;
    int n_fragments = 50;       // one fragment per cluster bacterium
    double sim_limit = 7200.0;  // virtual seconds (120 minutes)
    double sampling_period = 10.0;

    // Travel and conjugation durations are normals truncated at a small
    // positive epsilon. The means are fixed by calibrating the reference
    // scenarios (150 retrievers vs 0 and vs 1900 attackers) against their
    // target mean retrieval times; see tools/calibrate.
    double travel_mean = 1047.0;
    double travel_sd = 120.0;
    double conj_duration_mean = 133.0;
    double conj_duration_sd = 12.0;
    double conj_success_p = 1.0;

    std::uint64_t rng_seed = 0;

    // Throws std::invalid_argument naming the violated invariant.
    void validate() const;
};

} // namespace bnn::sim
