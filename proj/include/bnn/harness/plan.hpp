#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "bnn/ml/dataset.hpp"
#include "bnn/sim/config.hpp"
#include "bnn/sim/sweep.hpp"

namespace bnn::harness {

// One end-to-end experiment: the scenario grid, seeds, sampling periods,
// metric orders, feature kinds and the model-selection settings.
struct ExperimentPlan {
    sim::Range legit{10, 150, 20};
    sim::Range malicious{0, 1900, 200};
    std::vector<std::uint64_t> seeds;
    std::vector<double> sampling_periods{10, 20, 30, 60, 120, 240};
    std::vector<double> metric_orders{0.5, 2, 5, 10};
    std::vector<ml::FeatureKind> feature_kinds{ml::FeatureKind::count, ml::FeatureKind::sum,
                                               ml::FeatureKind::sample};
    int cv_folds = 5;
    double train_fraction = 0.7;
    std::uint64_t split_seed = 2209;
    bool exclude_subsaturation = false; // drop attack rows below cluster saturation
    sim::ScenarioConfig scenario;       // counts and seed overridden per grid cell

    void validate() const;

    // widest sampling period the simulator runs at; coarser periods rebin it
    double base_period() const;

    // the desk-scale grid: 8 x 10 cells, 10 seeds
    static ExperimentPlan desk_default();

    nlohmann::json to_json() const;
    static ExperimentPlan from_json(const nlohmann::json& j);
};

nlohmann::json config_to_json(const sim::ScenarioConfig& c);
sim::ScenarioConfig config_from_json(const nlohmann::json& j);
nlohmann::json summary_to_json(const sim::SimulationSummary& s);

} // namespace bnn::harness
