#pragma once

#include <filesystem>
#include <map>
#include <vector>

#include "bnn/harness/artifacts.hpp"
#include "bnn/harness/plan.hpp"
#include "bnn/ml/evaluate.hpp"
#include "bnn/ml/grid_search.hpp"
#include "bnn/sim/sweep.hpp"

namespace bnn::harness {

// Scenario grid simulated once at the plan's base period; every coarser
// sampling period downstream is a rebin of the same event streams.
struct SweepData {
    std::vector<sim::SweepEntry> runs; // sorted by (n_legit, n_malicious, seed)
    double base_period = 0.0;
};

SweepData simulate_plan(const ExperimentPlan& plan, int jobs);

// Zero-attacker reference runs per legitimate count, seeded disjointly from
// the plan's seed list.
std::map<int, sim::ArrivalTrace> simulate_baselines(const ExperimentPlan& plan, int jobs);

// trace CSV (bin_index,time_s,arrivals) + JSON sidecar with config and summary
void write_trace_artifacts(const sim::ScenarioConfig& config, const sim::ArrivalTrace& trace,
                           const sim::SimulationSummary& summary, ArtifactWriter& out);

// retrieval surface + per-scenario traces + sweep manifest (config, summary)
void run_attack_sweep(const SweepData& data, ArtifactWriter& out);

// entropy and baseline distance per scenario for every (order, period)
void run_metric_sweep(const ExperimentPlan& plan, const SweepData& data, ArtifactWriter& out);

struct MlCell {
    double sampling_period = 0.0;
    ml::FeatureKind kind = ml::FeatureKind::count;
    ml::Algorithm algorithm = ml::Algorithm::logistic_regression;
    ml::ClassifierSpec best_spec;
    double cv_auroc = 0.0;
    int skipped_folds = 0;
    ml::EvalReport report;
};

struct MlEvalResult {
    std::vector<MlCell> cells; // period-major, then feature, then classifier
};

// grid-search CV on the 70% split, final evaluation on the held-out 30%,
// for every sampling period x feature x classifier; writes the cell table,
// the across-period summary, the classifier ranking and the base-period
// ROC / PR curves.
MlEvalResult run_ml_eval(const ExperimentPlan& plan, const SweepData& data, ArtifactWriter& out,
                         int jobs);

// labeled, preprocessed feature matrices per (period, feature kind)
void write_datasets(const ExperimentPlan& plan, const SweepData& data, ArtifactWriter& out);

// reload of a dataset directory written by write_datasets
struct StoredDataset {
    ml::Dataset train;
    ml::Dataset test;
    int cv_folds = 5;
    std::uint64_t split_seed = 0;
};

StoredDataset load_dataset_dir(const std::filesystem::path& dir);

} // namespace bnn::harness
