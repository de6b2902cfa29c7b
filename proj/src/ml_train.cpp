#include "ml_models.hpp"

#include <stdexcept>

namespace bnn::ml {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::logistic_regression: return "logistic_regression";
        case Algorithm::knn: return "knn";
        case Algorithm::svm: return "svm";
        case Algorithm::random_forest: return "random_forest";
        case Algorithm::mlp: return "mlp";
    }
    throw std::logic_error("unreachable");
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "logistic_regression") return Algorithm::logistic_regression;
    if (name == "knn") return Algorithm::knn;
    if (name == "svm") return Algorithm::svm;
    if (name == "random_forest") return Algorithm::random_forest;
    if (name == "mlp") return Algorithm::mlp;
    throw std::invalid_argument("unknown algorithm: " + name);
}

namespace {

template <typename T>
T get_param(const ParamMap& params, const std::string& name, T fallback) {
    const auto it = params.find(name);
    if (it == params.end()) return fallback;
    if (const T* v = std::get_if<T>(&it->second)) return *v;
    // ints are accepted where doubles are expected
    if constexpr (std::is_same_v<T, double>) {
        if (const int* v = std::get_if<int>(&it->second)) return static_cast<double>(*v);
    }
    throw std::invalid_argument("parameter '" + name + "' has the wrong type");
}

} // namespace

bool ClassifierSpec::get_bool(const std::string& name, bool fallback) const {
    return get_param<bool>(params, name, fallback);
}
int ClassifierSpec::get_int(const std::string& name, int fallback) const {
    return get_param<int>(params, name, fallback);
}
double ClassifierSpec::get_double(const std::string& name, double fallback) const {
    return get_param<double>(params, name, fallback);
}
std::string ClassifierSpec::get_string(const std::string& name,
                                       const std::string& fallback) const {
    return get_param<std::string>(params, name, fallback);
}

nlohmann::json spec_to_json(const ClassifierSpec& spec) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, value] : spec.params)
        std::visit([&](const auto& v) { params[name] = v; }, value);
    return {{"algorithm", to_string(spec.algorithm)}, {"params", params}};
}

ClassifierSpec spec_from_json(const nlohmann::json& j) {
    ClassifierSpec spec;
    spec.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    for (const auto& [name, value] : j.at("params").items()) {
        if (value.is_boolean())
            spec.params[name] = value.get<bool>();
        else if (value.is_number_integer())
            spec.params[name] = value.get<int>();
        else if (value.is_number_float())
            spec.params[name] = value.get<double>();
        else
            spec.params[name] = value.get<std::string>();
    }
    return spec;
}

Vec TrainedModel::predict_scores(const Mat& X) const {
    if (X.rows() == 0) return Vec(0);
    if (X.cols() != n_features_)
        throw std::invalid_argument("predict: feature dimension differs from training");
    Vec s = score_impl(X);
    // numeric safety only; every scorer is already probability-like
    return s.cwiseMax(0.0).cwiseMin(1.0);
}

std::unique_ptr<TrainedModel> train(const ClassifierSpec& spec, const Dataset& train_set,
                                    std::uint64_t seed) {
    train_set.validate();
    if (train_set.rows() == 0) throw std::invalid_argument("train: empty training set");
    const bool has0 = (train_set.y.array() == 0).any();
    const bool has1 = (train_set.y.array() == 1).any();
    if (!has0 || !has1)
        throw std::invalid_argument("train: training set must contain both classes");

    switch (spec.algorithm) {
        case Algorithm::logistic_regression:
            return detail::LogisticModel::fit(spec, train_set, seed);
        case Algorithm::knn: return detail::KnnModel::fit(spec, train_set, seed);
        case Algorithm::svm: return detail::SvmModel::fit(spec, train_set, seed);
        case Algorithm::random_forest: return detail::ForestModel::fit(spec, train_set, seed);
        case Algorithm::mlp: return detail::MlpModel::fit(spec, train_set, seed);
    }
    throw std::logic_error("unreachable");
}

std::unique_ptr<TrainedModel> model_from_json(const nlohmann::json& j) {
    switch (algorithm_from_string(j.at("algorithm").get<std::string>())) {
        case Algorithm::logistic_regression: return detail::LogisticModel::load(j);
        case Algorithm::knn: return detail::KnnModel::load(j);
        case Algorithm::svm: return detail::SvmModel::load(j);
        case Algorithm::random_forest: return detail::ForestModel::load(j);
        case Algorithm::mlp: return detail::MlpModel::load(j);
    }
    throw std::logic_error("unreachable");
}

namespace detail {

Vec sigmoid(const Vec& z) {
    return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

} // namespace detail

} // namespace bnn::ml
