#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>

#include "json.hpp"

#include "bnn/ml/dataset.hpp"
#include "bnn/types.hpp"

namespace bnn::ml {

enum class Algorithm { logistic_regression, knn, svm, random_forest, mlp };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

using ParamValue = std::variant<bool, int, double, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

struct ClassifierSpec {
    Algorithm algorithm = Algorithm::logistic_regression;
    ParamMap params;

    bool get_bool(const std::string& name, bool fallback) const;
    int get_int(const std::string& name, int fallback) const;
    double get_double(const std::string& name, double fallback) const;
    std::string get_string(const std::string& name, const std::string& fallback) const;
};

nlohmann::json spec_to_json(const ClassifierSpec& spec);
ClassifierSpec spec_from_json(const nlohmann::json& j);

class TrainedModel {
public:
    virtual ~TrainedModel() = default;
    virtual Algorithm algorithm() const = 0;

    // One probability-like score in [0, 1] per row; hard labels use >= 0.5.
    Vec predict_scores(const Mat& X) const;

    virtual nlohmann::json to_json() const = 0;

protected:
    virtual Vec score_impl(const Mat& X) const = 0;
    Index n_features_ = 0;
};

// Deterministic given (spec, data, seed). Throws on a single-class or empty
// training set.
std::unique_ptr<TrainedModel> train(const ClassifierSpec& spec, const Dataset& train_set,
                                    std::uint64_t seed);

// Bit-exact reload of a serialized model: identical predictions.
std::unique_ptr<TrainedModel> model_from_json(const nlohmann::json& j);

} // namespace bnn::ml
