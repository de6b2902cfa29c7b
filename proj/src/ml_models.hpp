#pragma once

// Concrete classifier implementations, internal to the library; the public
// surface is train() / model_from_json() in bnn/ml/model.hpp.

#include <vector>

#include "bnn/ml/mlp_net.hpp"
#include "bnn/ml/model.hpp"

namespace bnn::ml::detail {

Vec sigmoid(const Vec& z);

struct LogisticModel final : TrainedModel {
    Vec weights;
    double bias = 0.0;
    bool fit_intercept = true;

    static std::unique_ptr<LogisticModel> fit(const ClassifierSpec&, const Dataset&,
                                              std::uint64_t seed);
    static std::unique_ptr<LogisticModel> load(const nlohmann::json&);
    Algorithm algorithm() const override { return Algorithm::logistic_regression; }
    nlohmann::json to_json() const override;

protected:
    Vec score_impl(const Mat& X) const override;
};

struct KnnModel final : TrainedModel {
    Mat train_X;
    IntVec train_y;
    int k = 5;
    bool distance_weighted = false;

    static std::unique_ptr<KnnModel> fit(const ClassifierSpec&, const Dataset&,
                                         std::uint64_t seed);
    static std::unique_ptr<KnnModel> load(const nlohmann::json&);
    Algorithm algorithm() const override { return Algorithm::knn; }
    nlohmann::json to_json() const override;

protected:
    Vec score_impl(const Mat& X) const override;
};

struct SvmModel final : TrainedModel {
    bool rbf = false;
    double gamma = 0.0;   // rbf kernel scale
    Vec weights;          // linear
    double bias = 0.0;    // linear
    Mat support_X;        // rbf
    Vec support_coef;     // rbf: alpha_j * y_j / (lambda * T)

    static std::unique_ptr<SvmModel> fit(const ClassifierSpec&, const Dataset&,
                                         std::uint64_t seed);
    static std::unique_ptr<SvmModel> load(const nlohmann::json&);
    Algorithm algorithm() const override { return Algorithm::svm; }
    nlohmann::json to_json() const override;

protected:
    Vec score_impl(const Mat& X) const override;
};

struct ForestModel final : TrainedModel {
    struct Node {
        int feature = -1; // -1: leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double leaf_value = 0.0; // positive-class fraction
    };
    std::vector<std::vector<Node>> trees;

    static std::unique_ptr<ForestModel> fit(const ClassifierSpec&, const Dataset&,
                                            std::uint64_t seed);
    static std::unique_ptr<ForestModel> load(const nlohmann::json&);
    Algorithm algorithm() const override { return Algorithm::random_forest; }
    nlohmann::json to_json() const override;

protected:
    Vec score_impl(const Mat& X) const override;
};

struct MlpModel final : TrainedModel {
    MlpNet net;

    static std::unique_ptr<MlpModel> fit(const ClassifierSpec&, const Dataset&,
                                         std::uint64_t seed);
    static std::unique_ptr<MlpModel> load(const nlohmann::json&);
    Algorithm algorithm() const override { return Algorithm::mlp; }
    nlohmann::json to_json() const override;

protected:
    Vec score_impl(const Mat& X) const override;
};

} // namespace bnn::ml::detail
