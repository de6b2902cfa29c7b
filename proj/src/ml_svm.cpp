#include <numeric>

#include "ml_json_util.hpp"
#include "ml_models.hpp"

namespace bnn::ml::detail {

namespace {

// labels mapped to {-1, +1} for the hinge loss
Vec signed_labels(const IntVec& y) {
    Vec s(y.size());
    for (Index i = 0; i < y.size(); ++i) s[i] = y[i] == 1 ? 1.0 : -1.0;
    return s;
}

std::vector<Index> shuffled_order(Index n, Rng& rng) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[rng.below(i)]);
    return order;
}

} // namespace

// Sub-gradient descent on the hinge loss (Pegasos steps, cyclic over a
// seed-shuffled order). The grid's C maps to lambda = 1/(C*n); scores come
// from a logistic link on the decision margin.
std::unique_ptr<SvmModel> SvmModel::fit(const ClassifierSpec& spec, const Dataset& ds,
                                        std::uint64_t seed) {
    auto m = std::make_unique<SvmModel>();
    const std::string kernel = spec.get_string("kernel", "linear");
    if (kernel != "linear" && kernel != "rbf")
        throw std::invalid_argument("svm: kernel must be 'linear' or 'rbf'");
    m->rbf = kernel == "rbf";
    const double C = spec.get_double("C", 1.0);
    if (!(C > 0)) throw std::invalid_argument("svm: C must be > 0");
    const int max_iter = spec.get_int("max_iter", 1000);
    if (max_iter < 1) throw std::invalid_argument("svm: max_iter must be >= 1");
    m->n_features_ = ds.cols();

    const Index n = ds.rows();
    const double lambda = 1.0 / (C * static_cast<double>(n));
    const Vec y = signed_labels(ds.y);
    Rng rng(mix64(seed, 0x5f3759df));
    const auto order = shuffled_order(n, rng);

    if (!m->rbf) {
        Vec w = Vec::Zero(ds.cols());
        double b = 0.0;
        // smooth the iterate noise with sparse suffix snapshots
        Vec w_sum = Vec::Zero(ds.cols());
        double b_sum = 0.0;
        long snapshots = 0;
        const int suffix_start = max_iter / 2 + 1;
        for (int t = 1; t <= max_iter; ++t) {
            const Index i = order[static_cast<std::size_t>((t - 1) % n)];
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double margin = y[i] * (ds.X.row(i).dot(w) + b);
            w *= (1.0 - eta * lambda);
            if (margin < 1.0) {
                w += (eta * y[i]) * ds.X.row(i).transpose();
                b += eta * y[i] / static_cast<double>(n);
            }
            if (t >= suffix_start && (t - suffix_start) % static_cast<int>(n) == 0) {
                w_sum += w;
                b_sum += b;
                ++snapshots;
            }
        }
        m->weights = w_sum / static_cast<double>(snapshots);
        m->bias = b_sum / static_cast<double>(snapshots);
        return m;
    }

    // gamma follows the 'scale' heuristic: 1 / (n_features * mean feature variance)
    const Vec col_mean = ds.X.colwise().mean();
    const double var =
        (ds.X.rowwise() - col_mean.transpose()).array().square().sum() /
        static_cast<double>(ds.rows() * ds.cols());
    m->gamma = var > 0 ? 1.0 / (static_cast<double>(ds.cols()) * var) : 1.0;

    Mat K(n, n);
    {
        const Vec sq = ds.X.rowwise().squaredNorm();
        K.noalias() = ds.X * ds.X.transpose();
        for (Index r = 0; r < n; ++r)
            for (Index c = 0; c < n; ++c)
                K(r, c) = std::exp(-m->gamma * (sq[r] + sq[c] - 2.0 * K(r, c)));
    }

    // suffix-averaged kernel Pegasos: the averaged decision function has far
    // less iterate noise than the last one at these iteration caps
    Vec alpha = Vec::Zero(n);
    Vec g = Vec::Zero(n); // g[i] = sum_j alpha_j y_j K(j, i)
    Vec avg_coef = Vec::Zero(n);
    const int suffix_start = max_iter / 2 + 1;
    long suffix_count = 0;
    for (int t = 1; t <= max_iter; ++t) {
        const Index i = order[static_cast<std::size_t>((t - 1) % n)];
        const double margin = y[i] * g[i] / (lambda * static_cast<double>(t));
        if (margin < 1.0) {
            alpha[i] += 1.0;
            g += y[i] * K.col(i);
        }
        if (t >= suffix_start) {
            avg_coef += alpha / static_cast<double>(t);
            ++suffix_count;
        }
    }
    const double scale = 1.0 / (lambda * static_cast<double>(suffix_count));
    std::vector<Index> support;
    for (Index i = 0; i < n; ++i)
        if (avg_coef[i] != 0.0) support.push_back(i);
    m->support_X.resize(static_cast<Index>(support.size()), ds.cols());
    m->support_coef.resize(static_cast<Index>(support.size()));
    for (std::size_t s = 0; s < support.size(); ++s) {
        m->support_X.row(static_cast<Index>(s)) = ds.X.row(support[s]);
        m->support_coef[static_cast<Index>(s)] = avg_coef[support[s]] * y[support[s]] * scale;
    }
    return m;
}

Vec SvmModel::score_impl(const Mat& X) const {
    Vec margin;
    if (!rbf) {
        margin = X * weights + Vec::Constant(X.rows(), bias);
    } else {
        margin = Vec::Zero(X.rows());
        if (support_X.rows() > 0) {
            const Vec sq_s = support_X.rowwise().squaredNorm();
            const Vec sq_x = X.rowwise().squaredNorm();
            Mat cross = X * support_X.transpose(); // rows x supports
            for (Index r = 0; r < X.rows(); ++r)
                for (Index s = 0; s < support_X.rows(); ++s)
                    margin[r] += support_coef[s] *
                                 std::exp(-gamma * (sq_x[r] + sq_s[s] - 2.0 * cross(r, s)));
        }
    }
    return sigmoid(margin);
}

nlohmann::json SvmModel::to_json() const {
    return {{"algorithm", "svm"},
            {"rbf", rbf},
            {"gamma", gamma},
            {"n_features", n_features_},
            {"weights", vec_to_json(weights)},
            {"bias", bias},
            {"support_X", mat_to_json(support_X)},
            {"support_coef", vec_to_json(support_coef)}};
}

std::unique_ptr<SvmModel> SvmModel::load(const nlohmann::json& j) {
    auto m = std::make_unique<SvmModel>();
    m->rbf = j.at("rbf").get<bool>();
    m->gamma = j.at("gamma").get<double>();
    m->n_features_ = j.at("n_features").get<Index>();
    m->weights = vec_from_json(j.at("weights"));
    m->bias = j.at("bias").get<double>();
    m->support_X = mat_from_json(j.at("support_X"));
    m->support_coef = vec_from_json(j.at("support_coef"));
    return m;
}

} // namespace bnn::ml::detail
