#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "bnn/harness/runner.hpp"
#include "test_util.hpp"

using namespace bnn;
using namespace bnn::harness;
namespace fs = std::filesystem;

namespace {

ExperimentPlan micro_plan() {
    ExperimentPlan plan;
    plan.legit = {20, 60, 40};       // 20, 60
    plan.malicious = {0, 300, 300};  // 0, 300
    plan.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    plan.sampling_periods = {60, 120};
    plan.metric_orders = {2};
    plan.cv_folds = 3;
    plan.validate();
    return plan;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

std::map<std::string, std::string> hash_tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            out[fs::relative(entry.path(), root).string()] = sha256_hex(slurp(entry.path()));
    return out;
}

void run_pipeline(const ExperimentPlan& plan, const fs::path& dir, int jobs) {
    ArtifactWriter out(dir);
    const SweepData data = simulate_plan(plan, jobs);
    run_attack_sweep(data, out);
    run_metric_sweep(plan, data, out);
    write_datasets(plan, data, out);
    run_ml_eval(plan, data, out, jobs);
    out.write_manifest("pipeline", plan.to_json());
}

void sha256_vectors() {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

void double_formatting() {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 7.1e300, 0.0, -14.25, 6000.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(42.0) == "42");
}

void plan_json_roundtrip() {
    const ExperimentPlan plan = ExperimentPlan::desk_default();
    const ExperimentPlan back = ExperimentPlan::from_json(plan.to_json());
    CHECK(plan.to_json().dump() == back.to_json().dump());
    CHECK(back.legit.upper == 150);
    CHECK(back.seeds.size() == 10);
    CHECK(back.base_period() == 10.0);

    nlohmann::json j = plan.to_json();
    j["sampling_periods"] = {7.0}; // does not divide 7200
    CHECK_THROWS(std::invalid_argument, ExperimentPlan::from_json(j));
    j = plan.to_json();
    j["seeds"] = nlohmann::json::array();
    CHECK_THROWS(std::invalid_argument, ExperimentPlan::from_json(j));
    j = plan.to_json();
    j["legit_range"] = {150, 10, 10};
    CHECK_THROWS(std::invalid_argument, ExperimentPlan::from_json(j));
    j = plan.to_json();
    j["cv_folds"] = 1;
    CHECK_THROWS(std::invalid_argument, ExperimentPlan::from_json(j));
}

void config_json_roundtrip() {
    sim::ScenarioConfig c;
    c.n_legit = 42;
    c.n_malicious = 17;
    c.rng_seed = 0xdeadbeef;
    const sim::ScenarioConfig back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back).dump() == config_to_json(c).dump());
    // partial JSON fills defaults
    const sim::ScenarioConfig partial = config_from_json({{"n_legit", 5}});
    CHECK(partial.n_legit == 5);
    CHECK(partial.cluster_size == 50);
    CHECK(partial.sim_limit == 7200.0);
}

void manifest_completeness(const fs::path& dir) {
    nlohmann::json manifest;
    std::ifstream in(dir / "manifest_pipeline.json");
    in >> manifest;
    const auto& artifacts = manifest.at("artifacts");

    std::size_t files_on_disk = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), dir).generic_string();
        if (rel.starts_with("manifest_")) continue;
        ++files_on_disk;
        if (!CHECK(artifacts.contains(rel))) continue;
        CHECK(artifacts.at(rel).get<std::string>() == sha256_hex(slurp(entry.path())));
    }
    CHECK(files_on_disk == artifacts.size());
    CHECK(manifest.at("plan").contains("seeds"));
}

void golden_headers(const fs::path& dir) {
    CHECK(first_line(dir / "traces/trace_L20_M0_S1.csv") == "bin_index,time_s,arrivals");
    CHECK(first_line(dir / "sweep/retrieval_surface.csv") ==
          "n_legit,n_malicious,mean_retrieved_fraction,mean_retrieval_time_s,"
          "sd_retrieval_time_s");
    CHECK(first_line(dir / "metrics/metric_surface.csv") ==
          "n_legit,n_malicious,alpha,sampling_period,entropy,distance,no_overlap");
    CHECK(first_line(dir / "reports/ml_cells.csv") ==
          "sampling_period,feature,classifier,auroc,auprc,accuracy,precision,recall,f1,"
          "specificity,fpr");
    CHECK(first_line(dir / "reports/ml_summary.csv") ==
          "classifier,feature,auroc_mean,auroc_sd,auprc_mean,auprc_sd");
    CHECK(first_line(dir / "reports/ml_ranking.csv") == "rank,classifier,mean_auroc");
    CHECK(first_line(dir / "reports/curves/sum_random_forest_p60_roc.csv") == "fpr,tpr");
    CHECK(first_line(dir / "reports/curves/sum_random_forest_p60_pr.csv") ==
          "recall,precision");
    CHECK(first_line(dir / "dataset/period60_count/features.csv")
              .starts_with("label,split,n_legit,n_malicious,seed,f0"));

    // scenario manifest is the (config, summary) array
    nlohmann::json scenarios;
    std::ifstream in(dir / "sweep/scenarios.json");
    in >> scenarios;
    CHECK(scenarios.is_array());
    CHECK(scenarios.size() == 2 * 2 * 10);
    CHECK(scenarios.at(0).contains("config"));
    CHECK(scenarios.at(0).contains("summary"));
}

void dataset_reload(const fs::path& dir) {
    const StoredDataset stored = load_dataset_dir(dir / "dataset/period60_sum");
    CHECK(stored.train.rows() + stored.test.rows() == 40);
    CHECK(stored.train.cols() == stored.test.cols());
    CHECK(stored.cv_folds == 3);
    CHECK((stored.train.y.array() == 0).any() && (stored.train.y.array() == 1).any());
    CHECK((stored.test.y.array() == 0).any() && (stored.test.y.array() == 1).any());
}

void pipeline_determinism() {
    const ExperimentPlan plan = micro_plan();
    const fs::path base = fs::temp_directory_path() / "bnn_harness_test";
    fs::remove_all(base);
    run_pipeline(plan, base / "run1", 1);
    run_pipeline(plan, base / "run2", 1);
    run_pipeline(plan, base / "run3", 2); // scheduling must not leak into artifacts

    const auto h1 = hash_tree(base / "run1");
    const auto h2 = hash_tree(base / "run2");
    const auto h3 = hash_tree(base / "run3");
    CHECK(!h1.empty());
    CHECK(h1 == h2);
    CHECK(h1 == h3);

    manifest_completeness(base / "run1");
    golden_headers(base / "run1");
    dataset_reload(base / "run1");
    fs::remove_all(base);
}

} // namespace

int main() {
    sha256_vectors();
    double_formatting();
    plan_json_roundtrip();
    config_json_roundtrip();
    pipeline_determinism();
    return testutil::summary("test_harness");
}
