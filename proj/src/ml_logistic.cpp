#include "ml_json_util.hpp"
#include "ml_models.hpp"

namespace bnn::ml::detail {

std::unique_ptr<LogisticModel> LogisticModel::fit(const ClassifierSpec& spec,
                                                  const Dataset& ds, std::uint64_t) {
    auto m = std::make_unique<LogisticModel>();
    m->fit_intercept = spec.get_bool("fit_intercept", true);
    m->n_features_ = ds.cols();
    m->weights = Vec::Zero(ds.cols());
    m->bias = 0.0;

    const Vec y = ds.y.cast<double>();
    const double n = static_cast<double>(ds.rows());
    const double l2 = 1.0 / n; // C = 1 in the usual parameterization

    // penalized mean binary cross-entropy, softplus form
    const auto loss_at = [&](const Vec& w, double b) {
        const Vec z = ds.X * w + Vec::Constant(ds.rows(), b);
        double loss = 0.5 * l2 * w.squaredNorm();
        for (Index i = 0; i < z.size(); ++i)
            loss +=
                (std::max(z[i], 0.0) + std::log1p(std::exp(-std::abs(z[i]))) - y[i] * z[i]) / n;
        return loss;
    };

    // backtracking gradient descent: the step adapts to the curvature, which
    // varies wildly between feature kinds (prefix-sum columns are collinear)
    double lr = 1.0;
    const int max_iters = 1000;
    double loss = loss_at(m->weights, m->bias);
    for (int it = 0; it < max_iters; ++it) {
        const Vec z = ds.X * m->weights + Vec::Constant(ds.rows(), m->bias);
        const Vec residual = sigmoid(z) - y;
        const Vec grad_w = ds.X.transpose() * residual / n + l2 * m->weights;
        const double grad_b = m->fit_intercept ? residual.sum() / n : 0.0;
        const double grad_norm2 = grad_w.squaredNorm() + grad_b * grad_b;

        double next_loss = 0.0;
        Vec w_try;
        double b_try = 0.0;
        int halvings = 0;
        for (;; ++halvings) {
            w_try = m->weights - lr * grad_w;
            b_try = m->bias - lr * grad_b;
            next_loss = loss_at(w_try, b_try);
            if (next_loss <= loss - 1e-4 * lr * grad_norm2 || halvings >= 40) break;
            lr *= 0.5;
        }
        m->weights = std::move(w_try);
        m->bias = b_try;
        if (halvings == 0) lr = std::min(lr * 1.25, 4.0);
        if (loss - next_loss < 1e-8) break;
        loss = next_loss;
    }
    return m;
}

Vec LogisticModel::score_impl(const Mat& X) const {
    return sigmoid(X * weights + Vec::Constant(X.rows(), bias));
}

nlohmann::json LogisticModel::to_json() const {
    return {{"algorithm", "logistic_regression"},
            {"fit_intercept", fit_intercept},
            {"n_features", n_features_},
            {"weights", vec_to_json(weights)},
            {"bias", bias}};
}

std::unique_ptr<LogisticModel> LogisticModel::load(const nlohmann::json& j) {
    auto m = std::make_unique<LogisticModel>();
    m->fit_intercept = j.at("fit_intercept").get<bool>();
    m->n_features_ = j.at("n_features").get<Index>();
    m->weights = vec_from_json(j.at("weights"));
    m->bias = j.at("bias").get<double>();
    return m;
}

} // namespace bnn::ml::detail
