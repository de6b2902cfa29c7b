#pragma once

#include <map>
#include <vector>

#include "bnn/info/metrics.hpp"
#include "bnn/info/probability.hpp"
#include "bnn/sim/trace.hpp"

namespace bnn::info {

// Reference profile of normal traffic: the baseline probability sample plus
// per-order decision thresholds on the information distance and the entropy
// deviation. Thresholds come from calibration runs, not from the paper.
struct BaselineProfile {
    ProbabilitySample reference;
    std::map<double, double> distance_threshold;  // keyed by alpha
    std::map<double, double> entropy_threshold;   // keyed by alpha; on |dH|

    BaselineProfile(ProbabilitySample ref) : reference(std::move(ref)) {}
};

struct Detection {
    bool attack = false;
    double score = 0.0;         // info_distance(baseline', observed', alpha)
    double entropy_delta = 0.0; // |H_a(observed) - H_a(baseline)|
    bool no_overlap = false;    // disjoint support; score forced maximal
};

// Builds a profile from normal-traffic traces: the first trace provides the
// reference sample; per-order thresholds are mean + 3 sd of the
// normal-vs-normal distances (and entropy deviations) within the set.
BaselineProfile calibrate_baseline(const std::vector<sim::ArrivalTrace>& normal_traces,
                                   const std::vector<double>& orders);

// Flags the observed trace as an attack when its distance from the baseline
// exceeds the profile threshold for that order. Disjoint support counts as an
// attack with an infinite score.
Detection detect(const BaselineProfile& baseline, const sim::ArrivalTrace& observed,
                 MetricOrder order);

} // namespace bnn::info
