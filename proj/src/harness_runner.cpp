#include "bnn/harness/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bnn/info/metrics.hpp"
#include "bnn/info/probability.hpp"
#include "bnn/parallel.hpp"
#include "bnn/rng.hpp"
#include "bnn/stats.hpp"

namespace bnn::harness {

namespace {

constexpr std::uint64_t kBaselineSalt = 0xba5e11de5eedULL;

const ml::Algorithm kAllAlgorithms[] = {
    ml::Algorithm::svm, ml::Algorithm::mlp, ml::Algorithm::random_forest, ml::Algorithm::knn,
    ml::Algorithm::logistic_regression,
};

std::string trace_stem(const sim::ScenarioConfig& c) {
    return "trace_L" + std::to_string(c.n_legit) + "_M" + std::to_string(c.n_malicious) +
           "_S" + std::to_string(c.rng_seed);
}

std::string period_tag(double period) {
    const long ms = std::lround(period * 1000.0);
    if (ms % 1000 == 0) return std::to_string(ms / 1000);
    return format_double(period);
}

std::string trace_csv(const sim::ArrivalTrace& trace) {
    std::string out = "bin_index,time_s,arrivals\n";
    for (std::size_t i = 0; i < trace.bins.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(static_cast<double>(i) * trace.sampling_period);
        out += ',';
        out += std::to_string(trace.bins[i]);
        out += '\n';
    }
    return out;
}

} // namespace

SweepData simulate_plan(const ExperimentPlan& plan, int jobs) {
    plan.validate();
    SweepData data;
    data.base_period = plan.base_period();
    sim::ScenarioConfig base = plan.scenario;
    base.sampling_period = data.base_period;
    data.runs = sim::sweep(base, plan.legit, plan.malicious, plan.seeds, jobs);
    return data;
}

std::map<int, sim::ArrivalTrace> simulate_baselines(const ExperimentPlan& plan, int jobs) {
    const std::set<std::uint64_t> taken(plan.seeds.begin(), plan.seeds.end());
    std::vector<sim::ScenarioConfig> configs;
    for (int n_legit : plan.legit.values()) {
        sim::ScenarioConfig c = plan.scenario;
        c.sampling_period = plan.base_period();
        c.n_legit = n_legit;
        c.n_malicious = 0;
        c.rng_seed = mix64(kBaselineSalt, static_cast<std::uint64_t>(n_legit));
        while (taken.count(c.rng_seed) > 0) c.rng_seed = mix64(c.rng_seed, kBaselineSalt);
        configs.push_back(c);
    }
    std::vector<sim::ArrivalTrace> traces(configs.size());
    parallel_for(configs.size(), jobs,
                 [&](std::size_t i) { traces[i] = sim::simulate(configs[i]).trace; });
    std::map<int, sim::ArrivalTrace> out;
    for (std::size_t i = 0; i < configs.size(); ++i)
        out[configs[i].n_legit] = std::move(traces[i]);
    return out;
}

void write_trace_artifacts(const sim::ScenarioConfig& config, const sim::ArrivalTrace& trace,
                           const sim::SimulationSummary& summary, ArtifactWriter& out) {
    const std::string stem = "traces/" + trace_stem(config);
    out.write(stem + ".csv", trace_csv(trace));
    out.write_json(stem + ".json", {{"config", config_to_json(config)},
                                    {"summary", summary_to_json(summary)}});
}

void run_attack_sweep(const SweepData& data, ArtifactWriter& out) {
    nlohmann::json manifest = nlohmann::json::array();
    for (const auto& run : data.runs) {
        write_trace_artifacts(run.config, run.trace, run.summary, out);
        manifest.push_back({{"config", config_to_json(run.config)},
                            {"summary", summary_to_json(run.summary)}});
    }
    out.write_json("sweep/scenarios.json", manifest);

    std::string surface = "n_legit,n_malicious,mean_retrieved_fraction,"
                          "mean_retrieval_time_s,sd_retrieval_time_s\n";
    for (std::size_t i = 0; i < data.runs.size();) {
        const int nl = data.runs[i].config.n_legit;
        const int nm = data.runs[i].config.n_malicious;
        std::vector<double> fractions, times;
        while (i < data.runs.size() && data.runs[i].config.n_legit == nl &&
               data.runs[i].config.n_malicious == nm) {
            fractions.push_back(data.runs[i].summary.retrieved_fraction);
            times.push_back(data.runs[i].summary.retrieval_time);
            ++i;
        }
        surface += std::to_string(nl) + ',' + std::to_string(nm) + ',' +
                   format_double(mean(fractions)) + ',' + format_double(mean(times)) + ',' +
                   format_double(stdev(times)) + '\n';
    }
    out.write("sweep/retrieval_surface.csv", surface);
}

void run_metric_sweep(const ExperimentPlan& plan, const SweepData& data, ArtifactWriter& out) {
    const auto baselines = simulate_baselines(plan, 1);

    // rows grouped per (alpha, period) surface, scenarios in sweep order
    std::vector<std::string> blocks(plan.metric_orders.size() * plan.sampling_periods.size());
    for (std::size_t pi = 0; pi < plan.sampling_periods.size(); ++pi) {
        const double period = plan.sampling_periods[pi];
        std::map<int, info::ProbabilitySample> baseline_samples;
        for (const auto& [nl, trace] : baselines)
            baseline_samples.emplace(nl, info::to_probability_sample(sim::rebin(trace, period)));

        std::vector<info::ProbabilitySample> samples;
        samples.reserve(data.runs.size());
        for (const auto& run : data.runs)
            samples.push_back(info::to_probability_sample(sim::rebin(run.trace, period)));

        for (std::size_t ai = 0; ai < plan.metric_orders.size(); ++ai) {
            const info::MetricOrder order(plan.metric_orders[ai]);
            std::string& block = blocks[ai * plan.sampling_periods.size() + pi];
            for (std::size_t r = 0; r < data.runs.size(); ++r) {
                const auto& run = data.runs[r];
                const double entropy = info::generalized_entropy(samples[r], order);
                double distance = std::numeric_limits<double>::infinity();
                bool no_overlap = false;
                try {
                    const auto pair = info::make_continuous(
                        baseline_samples.at(run.config.n_legit), samples[r]);
                    distance = info::info_distance(pair.p, pair.q, order);
                } catch (const info::NoOverlapError&) {
                    no_overlap = true;
                }
                block += std::to_string(run.config.n_legit) + ',' +
                         std::to_string(run.config.n_malicious) + ',' +
                         format_double(order.alpha) + ',' + format_double(period) + ',' +
                         format_double(entropy) + ',' + format_double(distance) + ',' +
                         (no_overlap ? "1" : "0") + '\n';
            }
        }
    }

    std::string csv = "n_legit,n_malicious,alpha,sampling_period,entropy,distance,no_overlap\n";
    for (std::size_t ai = 0; ai < plan.metric_orders.size(); ++ai)
        for (std::size_t pi = 0; pi < plan.sampling_periods.size(); ++pi)
            csv += blocks[ai * plan.sampling_periods.size() + pi];
    out.write("metrics/metric_surface.csv", csv);
}

namespace {

struct LabeledRows {
    std::vector<std::size_t> run_ids; // after the sub-saturation filter
    IntVec labels;                    // 0 attack, 1 normal
    std::vector<Index> train_rows;    // indices into run_ids
    std::vector<Index> test_rows;
};

LabeledRows label_and_split(const ExperimentPlan& plan, const SweepData& data) {
    LabeledRows rows;
    for (std::size_t i = 0; i < data.runs.size(); ++i) {
        const auto& c = data.runs[i].config;
        if (plan.exclude_subsaturation && c.n_malicious > 0 &&
            c.n_legit + c.n_malicious < c.cluster_size)
            continue;
        rows.run_ids.push_back(i);
    }
    rows.labels.resize(static_cast<Index>(rows.run_ids.size()));
    for (std::size_t i = 0; i < rows.run_ids.size(); ++i)
        rows.labels[static_cast<Index>(i)] =
            data.runs[rows.run_ids[i]].config.n_malicious > 0 ? 0 : 1;
    std::tie(rows.train_rows, rows.test_rows) =
        ml::stratified_split_indices(rows.labels, plan.train_fraction, plan.split_seed);
    return rows;
}

struct CellDataset {
    ml::Dataset train;
    ml::Dataset test;
    ml::Preprocessor stats;
};

CellDataset build_cell_dataset(const SweepData& data, const LabeledRows& rows, double period,
                               ml::FeatureKind kind) {
    std::vector<Vec> raw;
    raw.reserve(rows.run_ids.size());
    for (std::size_t id : rows.run_ids)
        raw.push_back(ml::extract_features(sim::rebin(data.runs[id].trace, period), kind));

    std::vector<Vec> train_raw, test_raw;
    std::vector<int> train_labels, test_labels;
    for (Index r : rows.train_rows) {
        train_raw.push_back(raw[static_cast<std::size_t>(r)]);
        train_labels.push_back(rows.labels[r]);
    }
    for (Index r : rows.test_rows) {
        test_raw.push_back(raw[static_cast<std::size_t>(r)]);
        test_labels.push_back(rows.labels[r]);
    }

    CellDataset cell;
    auto fitted = ml::preprocess(train_raw, train_labels, kind, period);
    cell.stats = std::move(fitted.stats);
    cell.train = std::move(fitted.dataset);
    cell.test.X = cell.stats.transform(test_raw);
    cell.test.y = Eigen::Map<const IntVec>(test_labels.data(),
                                           static_cast<Index>(test_labels.size()));
    cell.test.kind = kind;
    cell.test.sampling_period = period;
    return cell;
}

std::string curve_csv_roc(const ml::EvalReport& r) {
    std::string out = "fpr,tpr\n";
    for (const auto& p : r.roc)
        out += format_double(p.fpr) + ',' + format_double(p.tpr) + '\n';
    return out;
}

std::string curve_csv_pr(const ml::EvalReport& r) {
    std::string out = "recall,precision\n";
    for (const auto& p : r.pr)
        out += format_double(p.recall) + ',' + format_double(p.precision) + '\n';
    return out;
}

std::string opt_num(const std::optional<double>& v) {
    return v ? format_double(*v) : "nan";
}

} // namespace

MlEvalResult run_ml_eval(const ExperimentPlan& plan, const SweepData& data, ArtifactWriter& out,
                         int jobs) {
    const LabeledRows rows = label_and_split(plan, data);

    // datasets shared by the five classifiers of each (period, kind) pair
    const std::size_t n_kinds = plan.feature_kinds.size();
    std::vector<CellDataset> datasets(plan.sampling_periods.size() * n_kinds);
    parallel_for(datasets.size(), jobs, [&](std::size_t i) {
        datasets[i] = build_cell_dataset(data, rows, plan.sampling_periods[i / n_kinds],
                                         plan.feature_kinds[i % n_kinds]);
    });

    constexpr std::size_t n_algos = std::size(kAllAlgorithms);
    MlEvalResult result;
    result.cells.resize(datasets.size() * n_algos);
    parallel_for(result.cells.size(), jobs, [&](std::size_t i) {
        const std::size_t dsi = i / n_algos;
        const CellDataset& cell = datasets[dsi];
        MlCell& mc = result.cells[i];
        mc.sampling_period = plan.sampling_periods[dsi / n_kinds];
        mc.kind = plan.feature_kinds[dsi % n_kinds];
        mc.algorithm = kAllAlgorithms[i % n_algos];

        const std::uint64_t cell_seed =
            mix64(plan.split_seed, static_cast<std::uint64_t>(i), 0xce11);
        const auto search = ml::grid_search_cv(cell.train, mc.algorithm,
                                               ml::default_grid(mc.algorithm), plan.cv_folds,
                                               cell_seed);
        mc.best_spec = search.best;
        mc.cv_auroc = search.best_mean_auroc;
        for (const auto& c : search.cells) mc.skipped_folds += c.skipped_folds;

        const auto model = ml::train(mc.best_spec, cell.train, mix64(cell_seed, 0xf17));
        mc.report = ml::evaluate(model->predict_scores(cell.test.X), cell.test.y);
    });

    for (const auto& mc : result.cells)
        if (mc.skipped_folds > 0)
            std::fprintf(stderr,
                         "warning: %d degenerate validation folds skipped "
                         "(period %s, %s, %s)\n",
                         mc.skipped_folds, period_tag(mc.sampling_period).c_str(),
                         ml::to_string(mc.kind).c_str(), ml::to_string(mc.algorithm).c_str());

    // per-cell table
    std::string cells_csv = "sampling_period,feature,classifier,auroc,auprc,accuracy,"
                            "precision,recall,f1,specificity,fpr\n";
    nlohmann::json report_json = nlohmann::json::array();
    for (const auto& mc : result.cells) {
        const auto& r = mc.report;
        cells_csv += format_double(mc.sampling_period) + ',' + ml::to_string(mc.kind) + ',' +
                     ml::to_string(mc.algorithm) + ',' + opt_num(r.auroc) + ',' +
                     opt_num(r.auprc) + ',' + format_double(r.accuracy) + ',' +
                     format_double(r.precision) + ',' + format_double(r.recall) + ',' +
                     format_double(r.f1) + ',' + format_double(r.specificity) + ',' +
                     format_double(r.fpr) + '\n';
        report_json.push_back({{"sampling_period", mc.sampling_period},
                               {"feature", ml::to_string(mc.kind)},
                               {"classifier", ml::to_string(mc.algorithm)},
                               {"best_spec", ml::spec_to_json(mc.best_spec)},
                               {"cv_auroc", mc.cv_auroc},
                               {"skipped_folds", mc.skipped_folds},
                               {"auroc", r.auroc ? nlohmann::json(*r.auroc) : nlohmann::json()},
                               {"auprc", r.auprc ? nlohmann::json(*r.auprc) : nlohmann::json()},
                               {"accuracy", r.accuracy},
                               {"precision", r.precision},
                               {"recall", r.recall},
                               {"f1", r.f1},
                               {"specificity", r.specificity},
                               {"fpr", r.fpr}});
    }
    out.write("reports/ml_cells.csv", cells_csv);
    out.write_json("reports/ml_report.json", report_json);

    // mean +- sd across periods per (classifier, feature)
    std::string summary_csv = "classifier,feature,auroc_mean,auroc_sd,auprc_mean,auprc_sd\n";
    for (std::size_t ai = 0; ai < n_algos; ++ai)
        for (std::size_t ki = 0; ki < n_kinds; ++ki) {
            std::vector<double> aurocs, auprcs;
            for (const auto& mc : result.cells)
                if (mc.algorithm == kAllAlgorithms[ai] && mc.kind == plan.feature_kinds[ki] &&
                    mc.report.auroc) {
                    aurocs.push_back(*mc.report.auroc);
                    auprcs.push_back(*mc.report.auprc);
                }
            summary_csv += ml::to_string(kAllAlgorithms[ai]) + ',' +
                           ml::to_string(plan.feature_kinds[ki]) + ',' +
                           format_double(mean(aurocs)) + ',' + format_double(stdev(aurocs)) +
                           ',' + format_double(mean(auprcs)) + ',' +
                           format_double(stdev(auprcs)) + '\n';
        }
    out.write("reports/ml_summary.csv", summary_csv);

    // classifier ranking by grand mean AUROC
    std::vector<std::pair<double, std::string>> ranking;
    for (std::size_t ai = 0; ai < n_algos; ++ai) {
        std::vector<double> aurocs;
        for (const auto& mc : result.cells)
            if (mc.algorithm == kAllAlgorithms[ai] && mc.report.auroc)
                aurocs.push_back(*mc.report.auroc);
        ranking.emplace_back(mean(aurocs), ml::to_string(kAllAlgorithms[ai]));
    }
    std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::string ranking_csv = "rank,classifier,mean_auroc\n";
    for (std::size_t i = 0; i < ranking.size(); ++i)
        ranking_csv += std::to_string(i + 1) + ',' + ranking[i].second + ',' +
                       format_double(ranking[i].first) + '\n';
    out.write("reports/ml_ranking.csv", ranking_csv);

    // ROC / PR curves at the base sampling period
    for (const auto& mc : result.cells) {
        if (mc.sampling_period != data.base_period || !mc.report.auroc) continue;
        const std::string stem = "reports/curves/" + ml::to_string(mc.kind) + "_" +
                                 ml::to_string(mc.algorithm) + "_p" +
                                 period_tag(mc.sampling_period);
        out.write(stem + "_roc.csv", curve_csv_roc(mc.report));
        out.write(stem + "_pr.csv", curve_csv_pr(mc.report));
    }
    return result;
}

void write_datasets(const ExperimentPlan& plan, const SweepData& data, ArtifactWriter& out) {
    const LabeledRows rows = label_and_split(plan, data);
    for (double period : plan.sampling_periods)
        for (ml::FeatureKind kind : plan.feature_kinds) {
            const CellDataset cell = build_cell_dataset(data, rows, period, kind);
            const std::string dir =
                "dataset/period" + period_tag(period) + "_" + ml::to_string(kind);

            std::string csv = "label,split,n_legit,n_malicious,seed";
            for (Index c = 0; c < cell.train.cols(); ++c)
                csv += ",f" + std::to_string(c);
            csv += '\n';
            auto emit = [&](const ml::Dataset& ds, const std::vector<Index>& which,
                            const char* tag) {
                for (Index r = 0; r < ds.rows(); ++r) {
                    const auto& cfg =
                        data.runs[rows.run_ids[static_cast<std::size_t>(which[
                            static_cast<std::size_t>(r)])]].config;
                    csv += std::to_string(ds.y[r]);
                    csv += ',';
                    csv += tag;
                    csv += ',' + std::to_string(cfg.n_legit) + ',' +
                           std::to_string(cfg.n_malicious) + ',' +
                           std::to_string(cfg.rng_seed);
                    for (Index c = 0; c < ds.cols(); ++c)
                        csv += ',' + format_double(ds.X(r, c));
                    csv += '\n';
                }
            };
            emit(cell.train, rows.train_rows, "train");
            emit(cell.test, rows.test_rows, "test");
            out.write(dir + "/features.csv", csv);

            out.write_json(
                dir + "/meta.json",
                {{"feature_kind", ml::to_string(kind)},
                 {"sampling_period", period},
                 {"label_rule", "0 when n_malicious > 0, else 1"},
                 {"split_seed", plan.split_seed},
                 {"train_fraction", plan.train_fraction},
                 {"cv_folds", plan.cv_folds},
                 {"exclude_subsaturation", plan.exclude_subsaturation},
                 {"pad_length", cell.stats.pad_length},
                 {"keep_begin", cell.stats.keep_begin},
                 {"keep_end", cell.stats.keep_end},
                 {"col_mean",
                  std::vector<double>(cell.stats.col_mean.data(),
                                      cell.stats.col_mean.data() + cell.stats.col_mean.size())},
                 {"col_scale",
                  std::vector<double>(cell.stats.col_scale.data(),
                                      cell.stats.col_scale.data() +
                                          cell.stats.col_scale.size())}});
        }
}

StoredDataset load_dataset_dir(const std::filesystem::path& dir) {
    std::ifstream meta_in(dir / "meta.json");
    if (!meta_in) throw std::runtime_error("cannot open " + (dir / "meta.json").string());
    nlohmann::json meta;
    meta_in >> meta;

    std::ifstream csv(dir / "features.csv");
    if (!csv) throw std::runtime_error("cannot open " + (dir / "features.csv").string());
    std::string line;
    if (!std::getline(csv, line)) throw std::runtime_error("empty features.csv");

    std::vector<std::vector<double>> train_x, test_x;
    std::vector<int> train_y, test_y;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        const int label = std::stoi(tok);
        std::getline(ss, tok, ',');
        const bool is_train = tok == "train";
        std::getline(ss, tok, ','); // n_legit
        std::getline(ss, tok, ','); // n_malicious
        std::getline(ss, tok, ','); // seed
        std::vector<double> xs;
        while (std::getline(ss, tok, ',')) xs.push_back(std::stod(tok));
        (is_train ? train_x : test_x).push_back(std::move(xs));
        (is_train ? train_y : test_y).push_back(label);
    }

    auto to_dataset = [&](const std::vector<std::vector<double>>& xs,
                          const std::vector<int>& ys) {
        ml::Dataset ds;
        ds.kind = ml::feature_kind_from_string(meta.at("feature_kind").get<std::string>());
        ds.sampling_period = meta.at("sampling_period").get<double>();
        const Index cols = xs.empty() ? 0 : static_cast<Index>(xs.front().size());
        ds.X.resize(static_cast<Index>(xs.size()), cols);
        ds.y.resize(static_cast<Index>(ys.size()));
        for (std::size_t r = 0; r < xs.size(); ++r) {
            for (Index c = 0; c < cols; ++c) ds.X(static_cast<Index>(r), c) = xs[r][static_cast<std::size_t>(c)];
            ds.y[static_cast<Index>(r)] = ys[r];
        }
        return ds;
    };

    StoredDataset stored;
    stored.train = to_dataset(train_x, train_y);
    stored.test = to_dataset(test_x, test_y);
    stored.cv_folds = meta.value("cv_folds", 5);
    stored.split_seed = meta.value("split_seed", std::uint64_t{0});
    return stored;
}

} // namespace bnn::harness
