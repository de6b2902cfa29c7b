// CLI for the archive simulator and the two detection engines.
//
// Subcommands: simulate, sweep, metrics, dataset, train, evaluate, report.
// Every run funnels its artifacts through an ArtifactWriter and finishes by
// writing manifest_<command>.json with the plan echo and a SHA-256 per file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "CLI11.hpp"

#include "bnn/harness/runner.hpp"
#include "bnn/ml/grid_search.hpp"
#include "bnn/rng.hpp"

using namespace bnn;
using namespace bnn::harness;

namespace {

ExperimentPlan load_plan(const std::string& config_path) {
    if (config_path.empty()) {
        ExperimentPlan plan = ExperimentPlan::desk_default();
        plan.validate();
        return plan;
    }
    std::ifstream in(config_path);
    if (!in) throw std::invalid_argument("cannot open config: " + config_path);
    nlohmann::json j;
    in >> j;
    return ExperimentPlan::from_json(j);
}

nlohmann::json report_to_json(const ml::EvalReport& r) {
    nlohmann::json roc = nlohmann::json::array();
    for (const auto& p : r.roc) roc.push_back({p.fpr, p.tpr});
    nlohmann::json pr = nlohmann::json::array();
    for (const auto& p : r.pr) pr.push_back({p.recall, p.precision});
    return {{"confusion",
             {{"tp", r.confusion.tp},
              {"tn", r.confusion.tn},
              {"fp", r.confusion.fp},
              {"fn", r.confusion.fn}}},
            {"accuracy", r.accuracy},
            {"precision", r.precision},
            {"recall", r.recall},
            {"f1", r.f1},
            {"specificity", r.specificity},
            {"fpr", r.fpr},
            {"auroc", r.auroc ? nlohmann::json(*r.auroc) : nlohmann::json()},
            {"auprc", r.auprc ? nlohmann::json(*r.auprc) : nlohmann::json()},
            {"roc", roc},
            {"pr", pr}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bacterial nanonetwork DNA archive: DoS simulation and detection"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--config", config_path, "experiment plan JSON file");
    auto* seed_opt =
        app.add_option("--seed", seed, "override the plan split seed / scenario seed");
    app.add_option("--out", out_dir, "output directory (default: out)");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* cmd_simulate = app.add_subcommand("simulate", "run one scenario, write its trace");
    int legit = 0, malicious = 0;
    double period = 10.0, sim_limit = 7200.0;
    cmd_simulate->add_option("--legit", legit, "legitimate retriever bacteria")->required();
    cmd_simulate->add_option("--malicious", malicious, "attacker bacteria")->required();
    cmd_simulate->add_option("--period", period, "sampling period in seconds");
    cmd_simulate->add_option("--sim-limit", sim_limit, "simulation cutoff in seconds");

    auto* cmd_sweep = app.add_subcommand("sweep", "simulate the scenario grid");
    auto* cmd_metrics =
        app.add_subcommand("metrics", "entropy / information-distance surfaces");
    auto* cmd_dataset = app.add_subcommand("dataset", "labeled feature matrices");
    auto* cmd_report = app.add_subcommand("report", "full ML evaluation grid");

    auto* cmd_train = app.add_subcommand("train", "grid-search CV on a stored dataset");
    std::string dataset_dir, classifier = "random_forest", model_path;
    cmd_train->add_option("--dataset", dataset_dir, "dataset directory")->required();
    cmd_train->add_option("--classifier", classifier,
                          "svm | mlp | random_forest | knn | logistic_regression");

    auto* cmd_evaluate = app.add_subcommand("evaluate", "score a stored model on a dataset");
    cmd_evaluate->add_option("--model", model_path, "model JSON file")->required();
    cmd_evaluate->add_option("--dataset", dataset_dir, "dataset directory")->required();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        (void)app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        ArtifactWriter out(out_dir);

        if (cmd_simulate->parsed()) {
            sim::ScenarioConfig config;
            config.n_legit = legit;
            config.n_malicious = malicious;
            config.sampling_period = period;
            config.sim_limit = sim_limit;
            config.rng_seed = seed;
            config.validate();
            const sim::SimResult r = sim::simulate(config);
            write_trace_artifacts(config, r.trace, r.summary, out);
            out.write_manifest("simulate", config_to_json(config));
            std::printf("retrieved_fraction=%s retrieval_time=%s delivered=%ld\n",
                        format_double(r.summary.retrieved_fraction).c_str(),
                        format_double(r.summary.retrieval_time).c_str(),
                        r.summary.delivered_total);
            return 0;
        }

        if (cmd_train->parsed() || cmd_evaluate->parsed()) {
            const StoredDataset stored = load_dataset_dir(dataset_dir);
            if (cmd_train->parsed()) {
                const ml::Algorithm algo = ml::algorithm_from_string(classifier);
                const std::uint64_t search_seed =
                    seed_opt->count() ? seed : stored.split_seed;
                const auto search = ml::grid_search_cv(
                    stored.train, algo, ml::default_grid(algo), stored.cv_folds, search_seed);
                const auto model =
                    ml::train(search.best, stored.train, mix64(search_seed, 0xf17));
                out.write_json("models/model_" + classifier + ".json", model->to_json());
                nlohmann::json cv = nlohmann::json::array();
                for (const auto& cell : search.cells)
                    cv.push_back({{"spec", ml::spec_to_json(cell.spec)},
                                  {"mean_auroc", cell.mean_auroc},
                                  {"fold_aurocs", cell.fold_aurocs},
                                  {"skipped_folds", cell.skipped_folds}});
                out.write_json("models/cv_" + classifier + ".json",
                               {{"best", ml::spec_to_json(search.best)},
                                {"best_mean_auroc", search.best_mean_auroc},
                                {"cells", cv}});
                out.write_manifest("train", {{"dataset", dataset_dir},
                                             {"classifier", classifier},
                                             {"seed", search_seed}});
                std::printf("best cv auroc=%s\n",
                            format_double(search.best_mean_auroc).c_str());
            } else {
                std::ifstream in(model_path);
                if (!in) throw std::invalid_argument("cannot open model: " + model_path);
                nlohmann::json j;
                in >> j;
                const auto model = ml::model_from_json(j);
                const ml::EvalReport report =
                    ml::evaluate(model->predict_scores(stored.test.X), stored.test.y);
                out.write_json("reports/eval_report.json", report_to_json(report));
                if (report.auroc) {
                    std::string roc = "fpr,tpr\n";
                    for (const auto& p : report.roc)
                        roc += format_double(p.fpr) + ',' + format_double(p.tpr) + '\n';
                    out.write("reports/eval_roc.csv", roc);
                    std::string pr = "recall,precision\n";
                    for (const auto& p : report.pr)
                        pr += format_double(p.recall) + ',' + format_double(p.precision) + '\n';
                    out.write("reports/eval_pr.csv", pr);
                }
                out.write_manifest("evaluate",
                                   {{"dataset", dataset_dir}, {"model", model_path}});
                std::printf("accuracy=%s auroc=%s auprc=%s\n",
                            format_double(report.accuracy).c_str(),
                            report.auroc ? format_double(*report.auroc).c_str() : "nan",
                            report.auprc ? format_double(*report.auprc).c_str() : "nan");
            }
            return 0;
        }

        ExperimentPlan plan = load_plan(config_path);
        if (seed_opt->count()) plan.split_seed = seed;

        const SweepData data = simulate_plan(plan, jobs);
        if (cmd_sweep->parsed()) {
            run_attack_sweep(data, out);
            out.write_manifest("sweep", plan.to_json());
        } else if (cmd_metrics->parsed()) {
            run_metric_sweep(plan, data, out);
            out.write_manifest("metrics", plan.to_json());
        } else if (cmd_dataset->parsed()) {
            write_datasets(plan, data, out);
            out.write_manifest("dataset", plan.to_json());
        } else if (cmd_report->parsed()) {
            run_ml_eval(plan, data, out, jobs);
            out.write_manifest("report", plan.to_json());
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: malformed JSON: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
