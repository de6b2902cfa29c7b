#include "bnn/harness/plan.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bnn::harness {

void ExperimentPlan::validate() const {
    (void)legit.values();
    (void)malicious.values();
    if (seeds.empty()) throw std::invalid_argument("plan: seeds must not be empty");
    if (sampling_periods.empty()) throw std::invalid_argument("plan: sampling_periods empty");
    for (double p : sampling_periods) {
        if (!(p > 0)) throw std::invalid_argument("plan: sampling periods must be > 0");
        const double k = std::round(scenario.sim_limit / p);
        if (k < 1 || std::abs(k * p - scenario.sim_limit) > 1e-9)
            throw std::invalid_argument("plan: every sampling period must divide sim_limit");
    }
    if (metric_orders.empty()) throw std::invalid_argument("plan: metric_orders empty");
    for (double a : metric_orders)
        if (!(a > 0)) throw std::invalid_argument("plan: metric orders must be > 0");
    if (feature_kinds.empty()) throw std::invalid_argument("plan: feature_kinds empty");
    if (cv_folds < 2) throw std::invalid_argument("plan: cv_folds must be >= 2");
    if (!(train_fraction > 0 && train_fraction < 1))
        throw std::invalid_argument("plan: train_fraction must lie in (0, 1)");
    sim::ScenarioConfig probe = scenario;
    probe.sampling_period = base_period();
    probe.validate();
}

double ExperimentPlan::base_period() const {
    long g = 0;
    for (double p : sampling_periods) {
        const long ms = std::lround(p * 1000.0);
        g = g == 0 ? ms : std::gcd(g, ms);
    }
    return static_cast<double>(g) / 1000.0;
}

ExperimentPlan ExperimentPlan::desk_default() {
    ExperimentPlan plan;
    for (std::uint64_t s = 1; s <= 10; ++s) plan.seeds.push_back(s);
    return plan;
}

nlohmann::json config_to_json(const sim::ScenarioConfig& c) {
    return {{"n_legit", c.n_legit},
            {"n_malicious", c.n_malicious},
            {"cluster_size", c.cluster_size},
            {"n_fragments", c.n_fragments},
            {"sim_limit", c.sim_limit},
            {"sampling_period", c.sampling_period},
            {"travel_mean", c.travel_mean},
            {"travel_sd", c.travel_sd},
            {"conj_duration_mean", c.conj_duration_mean},
            {"conj_duration_sd", c.conj_duration_sd},
            {"conj_success_p", c.conj_success_p},
            {"rng_seed", c.rng_seed}};
}

sim::ScenarioConfig config_from_json(const nlohmann::json& j) {
    sim::ScenarioConfig c;
    c.n_legit = j.value("n_legit", c.n_legit);
    c.n_malicious = j.value("n_malicious", c.n_malicious);
    c.cluster_size = j.value("cluster_size", c.cluster_size);
    c.n_fragments = j.value("n_fragments", j.value("cluster_size", c.n_fragments));
    c.sim_limit = j.value("sim_limit", c.sim_limit);
    c.sampling_period = j.value("sampling_period", c.sampling_period);
    c.travel_mean = j.value("travel_mean", c.travel_mean);
    c.travel_sd = j.value("travel_sd", c.travel_sd);
    c.conj_duration_mean = j.value("conj_duration_mean", c.conj_duration_mean);
    c.conj_duration_sd = j.value("conj_duration_sd", c.conj_duration_sd);
    c.conj_success_p = j.value("conj_success_p", c.conj_success_p);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    return c;
}

nlohmann::json summary_to_json(const sim::SimulationSummary& s) {
    return {{"retrieved_fraction", s.retrieved_fraction},
            {"retrieval_time", s.retrieval_time},
            {"delivered_total", s.delivered_total},
            {"malicious_conjugations", s.malicious_conjugations}};
}

namespace {

sim::Range range_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("plan: ranges are [lower, upper, step] triples");
    return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>()};
}

} // namespace

nlohmann::json ExperimentPlan::to_json() const {
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : feature_kinds) kinds.push_back(ml::to_string(k));
    return {{"legit_range", {legit.lower, legit.upper, legit.step}},
            {"malicious_range", {malicious.lower, malicious.upper, malicious.step}},
            {"seeds", seeds},
            {"sampling_periods", sampling_periods},
            {"metric_orders", metric_orders},
            {"feature_kinds", kinds},
            {"cv_folds", cv_folds},
            {"train_fraction", train_fraction},
            {"split_seed", split_seed},
            {"exclude_subsaturation", exclude_subsaturation},
            {"scenario", config_to_json(scenario)}};
}

ExperimentPlan ExperimentPlan::from_json(const nlohmann::json& j) {
    ExperimentPlan plan = desk_default();
    if (j.contains("legit_range")) plan.legit = range_from_json(j.at("legit_range"));
    if (j.contains("malicious_range"))
        plan.malicious = range_from_json(j.at("malicious_range"));
    if (j.contains("seeds")) plan.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("sampling_periods"))
        plan.sampling_periods = j.at("sampling_periods").get<std::vector<double>>();
    if (j.contains("metric_orders"))
        plan.metric_orders = j.at("metric_orders").get<std::vector<double>>();
    if (j.contains("feature_kinds")) {
        plan.feature_kinds.clear();
        for (const auto& name : j.at("feature_kinds"))
            plan.feature_kinds.push_back(ml::feature_kind_from_string(name.get<std::string>()));
    }
    plan.cv_folds = j.value("cv_folds", plan.cv_folds);
    plan.train_fraction = j.value("train_fraction", plan.train_fraction);
    plan.split_seed = j.value("split_seed", plan.split_seed);
    plan.exclude_subsaturation = j.value("exclude_subsaturation", plan.exclude_subsaturation);
    if (j.contains("scenario")) plan.scenario = config_from_json(j.at("scenario"));
    plan.validate();
    return plan;
}

} // namespace bnn::harness
