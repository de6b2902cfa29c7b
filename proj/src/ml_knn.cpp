#include <algorithm>
#include <numeric>

#include "ml_json_util.hpp"
#include "ml_models.hpp"

namespace bnn::ml::detail {

std::unique_ptr<KnnModel> KnnModel::fit(const ClassifierSpec& spec, const Dataset& ds,
                                        std::uint64_t) {
    auto m = std::make_unique<KnnModel>();
    m->k = spec.get_int("n_neighbors", 5);
    if (m->k < 1) throw std::invalid_argument("knn: n_neighbors must be >= 1");
    if (m->k > ds.rows()) throw std::invalid_argument("knn: n_neighbors exceeds training size");
    const std::string weights = spec.get_string("weights", "uniform");
    if (weights != "uniform" && weights != "distance")
        throw std::invalid_argument("knn: weights must be 'uniform' or 'distance'");
    m->distance_weighted = weights == "distance";
    // Table I also lists an 'algorithm' switch; at these dataset sizes every
    // option degenerates to the brute-force scan used here.
    m->train_X = ds.X;
    m->train_y = ds.y;
    m->n_features_ = ds.cols();
    return m;
}

Vec KnnModel::score_impl(const Mat& X) const {
    Vec out(X.rows());
    std::vector<Index> idx(static_cast<std::size_t>(train_X.rows()));
    for (Index r = 0; r < X.rows(); ++r) {
        const Vec d2 = (train_X.rowwise() - X.row(r)).rowwise().squaredNorm();
        std::iota(idx.begin(), idx.end(), Index{0});
        std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](Index a, Index b) {
            return d2[a] != d2[b] ? d2[a] < d2[b] : a < b;
        });
        if (!distance_weighted) {
            double pos = 0.0;
            for (int i = 0; i < k; ++i) pos += train_y[idx[static_cast<std::size_t>(i)]];
            out[r] = pos / static_cast<double>(k);
        } else if (d2[idx[0]] == 0.0) {
            // exact matches dominate: average over the zero-distance neighbors
            double pos = 0.0, cnt = 0.0;
            for (int i = 0; i < k && d2[idx[static_cast<std::size_t>(i)]] == 0.0; ++i) {
                pos += train_y[idx[static_cast<std::size_t>(i)]];
                cnt += 1.0;
            }
            out[r] = pos / cnt;
        } else {
            double wsum = 0.0, pos = 0.0;
            for (int i = 0; i < k; ++i) {
                const Index j = idx[static_cast<std::size_t>(i)];
                const double w = 1.0 / std::sqrt(d2[j]);
                wsum += w;
                pos += w * train_y[j];
            }
            out[r] = pos / wsum;
        }
    }
    return out;
}

nlohmann::json KnnModel::to_json() const {
    return {{"algorithm", "knn"},
            {"n_neighbors", k},
            {"distance_weighted", distance_weighted},
            {"n_features", n_features_},
            {"train_X", mat_to_json(train_X)},
            {"train_y", std::vector<int>(train_y.data(), train_y.data() + train_y.size())}};
}

std::unique_ptr<KnnModel> KnnModel::load(const nlohmann::json& j) {
    auto m = std::make_unique<KnnModel>();
    m->k = j.at("n_neighbors").get<int>();
    m->distance_weighted = j.at("distance_weighted").get<bool>();
    m->n_features_ = j.at("n_features").get<Index>();
    m->train_X = mat_from_json(j.at("train_X"));
    const auto ys = j.at("train_y").get<std::vector<int>>();
    m->train_y = Eigen::Map<const IntVec>(ys.data(), static_cast<Index>(ys.size()));
    return m;
}

} // namespace bnn::ml::detail
