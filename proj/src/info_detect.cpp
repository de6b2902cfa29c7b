#include "bnn/info/detect.hpp"

#include <cmath>
#include <limits>

#include "bnn/stats.hpp"

namespace bnn::info {

BaselineProfile calibrate_baseline(const std::vector<sim::ArrivalTrace>& normal_traces,
                                   const std::vector<double>& orders) {
    if (normal_traces.size() < 2)
        throw std::invalid_argument(
            "calibrate_baseline: need at least two normal traces (reference + witnesses)");
    BaselineProfile profile(to_probability_sample(normal_traces.front()));
    for (double alpha : orders) {
        const MetricOrder order(alpha);
        const double ref_entropy = generalized_entropy(profile.reference, order);
        std::vector<double> distances;
        std::vector<double> entropy_deltas;
        for (std::size_t i = 1; i < normal_traces.size(); ++i) {
            const ProbabilitySample other = to_probability_sample(normal_traces[i]);
            entropy_deltas.push_back(std::abs(generalized_entropy(other, order) - ref_entropy));
            try {
                const ContinuousPair pair = make_continuous(profile.reference, other);
                distances.push_back(info_distance(pair.p, pair.q, order));
            } catch (const NoOverlapError&) {
                // normal runs with disjoint support carry no usable spread
            }
        }
        if (distances.empty())
            throw std::runtime_error(
                "calibrate_baseline: no overlapping normal pair at alpha=" +
                std::to_string(alpha));
        profile.distance_threshold[alpha] = mean(distances) + 3.0 * stdev(distances);
        profile.entropy_threshold[alpha] = mean(entropy_deltas) + 3.0 * stdev(entropy_deltas);
    }
    return profile;
}

Detection detect(const BaselineProfile& baseline, const sim::ArrivalTrace& observed,
                 MetricOrder order) {
    const auto threshold_it = baseline.distance_threshold.find(order.alpha);
    if (threshold_it == baseline.distance_threshold.end())
        throw std::invalid_argument("detect: no threshold calibrated for this order");

    const ProbabilitySample obs = to_probability_sample(observed);
    Detection d;
    d.entropy_delta = std::abs(generalized_entropy(obs, order) -
                               generalized_entropy(baseline.reference, order));
    try {
        const ContinuousPair pair = make_continuous(baseline.reference, obs);
        d.score = info_distance(pair.p, pair.q, order);
        d.attack = d.score > threshold_it->second;
    } catch (const NoOverlapError&) {
        d.no_overlap = true;
        d.score = std::numeric_limits<double>::infinity();
        d.attack = true;
    }
    return d;
}

} // namespace bnn::info
