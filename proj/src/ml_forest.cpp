#include <algorithm>
#include <cmath>
#include <numeric>

#include "ml_json_util.hpp"
#include "ml_models.hpp"

namespace bnn::ml::detail {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double score = std::numeric_limits<double>::infinity();
};

// Builds one tree on bootstrap weights. Split search walks each candidate
// feature in sorted order; large nodes reuse the forest-wide presorted
// indices, small ones gather and sort locally.
class TreeBuilder {
public:
    TreeBuilder(const Mat& X, const IntVec& y,
                const std::vector<std::vector<int>>& sorted_rows, int max_features,
                int max_depth, Rng& rng)
        : X_(X), y_(y), sorted_rows_(sorted_rows), max_features_(max_features),
          max_depth_(max_depth), rng_(rng), in_node_(static_cast<std::size_t>(X.rows()), 0),
          feature_pool_(static_cast<std::size_t>(X.cols())) {
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
    }

    std::vector<ForestModel::Node> build(const std::vector<long>& weights) {
        weights_ = &weights;
        std::vector<int> rows;
        for (Index i = 0; i < X_.rows(); ++i)
            if (weights[static_cast<std::size_t>(i)] > 0) rows.push_back(static_cast<int>(i));
        nodes_.clear();
        grow(std::move(rows), 0);
        return std::move(nodes_);
    }

private:
    long weight_of(int row) const { return (*weights_)[static_cast<std::size_t>(row)]; }

    int grow(std::vector<int> rows, int depth) {
        long total = 0, positive = 0;
        for (int r : rows) {
            total += weight_of(r);
            positive += y_[r] == 1 ? weight_of(r) : 0;
        }
        const int id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        nodes_[static_cast<std::size_t>(id)].leaf_value =
            static_cast<double>(positive) / static_cast<double>(total);

        if (positive == 0 || positive == total || total < 2 || depth >= max_depth_)
            return id;

        const SplitChoice best = find_split(rows, total, positive);
        if (best.feature < 0) return id;

        std::vector<int> left, right;
        for (int r : rows)
            (X_(r, best.feature) <= best.threshold ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        nodes_[static_cast<std::size_t>(id)].feature = best.feature;
        nodes_[static_cast<std::size_t>(id)].threshold = best.threshold;
        const int l = grow(std::move(left), depth + 1);
        const int r = grow(std::move(right), depth + 1);
        nodes_[static_cast<std::size_t>(id)].left = l;
        nodes_[static_cast<std::size_t>(id)].right = r;
        return id;
    }

    // partial Fisher-Yates: the first max_features_ entries become the subset
    void draw_feature_subset() {
        const std::size_t d = feature_pool_.size();
        for (std::size_t i = 0; i < static_cast<std::size_t>(max_features_); ++i) {
            const std::size_t j = i + rng_.below(d - i);
            std::swap(feature_pool_[i], feature_pool_[j]);
        }
    }

    SplitChoice find_split(const std::vector<int>& rows, long total, long positive) {
        draw_feature_subset();
        SplitChoice best;
        const bool use_presorted = rows.size() * 3 >= static_cast<std::size_t>(X_.rows());
        if (use_presorted)
            for (int r : rows) in_node_[static_cast<std::size_t>(r)] = 1;

        for (int fi = 0; fi < max_features_; ++fi) {
            const int f = feature_pool_[static_cast<std::size_t>(fi)];
            if (use_presorted) {
                scan_buffer_.clear();
                for (int r : sorted_rows_[static_cast<std::size_t>(f)])
                    if (in_node_[static_cast<std::size_t>(r)]) scan_buffer_.push_back(r);
            } else {
                scan_buffer_ = rows;
                std::sort(scan_buffer_.begin(), scan_buffer_.end(), [&](int a, int b) {
                    const double xa = X_(a, f), xb = X_(b, f);
                    return xa != xb ? xa < xb : a < b;
                });
            }
            sweep_feature(f, total, positive, best);
        }

        if (use_presorted)
            for (int r : rows) in_node_[static_cast<std::size_t>(r)] = 0;
        return best;
    }

    void sweep_feature(int f, long total, long positive, SplitChoice& best) {
        long wl = 0, pl = 0;
        for (std::size_t i = 0; i + 1 < scan_buffer_.size(); ++i) {
            const int r = scan_buffer_[i];
            wl += weight_of(r);
            pl += y_[r] == 1 ? weight_of(r) : 0;
            const double x = X_(r, f);
            const double x_next = X_(scan_buffer_[i + 1], f);
            if (x == x_next) continue;
            const long wr = total - wl;
            const long pr = positive - pl;
            const double score =
                static_cast<double>(pl) * static_cast<double>(wl - pl) / static_cast<double>(wl) +
                static_cast<double>(pr) * static_cast<double>(wr - pr) / static_cast<double>(wr);
            if (score < best.score) {
                best.score = score;
                best.feature = f;
                best.threshold = 0.5 * (x + x_next);
            }
        }
    }

    const Mat& X_;
    const IntVec& y_;
    const std::vector<std::vector<int>>& sorted_rows_;
    const int max_features_;
    const int max_depth_;
    Rng& rng_;
    const std::vector<long>* weights_ = nullptr;
    std::vector<ForestModel::Node> nodes_;
    std::vector<unsigned char> in_node_;
    std::vector<int> feature_pool_;
    std::vector<int> scan_buffer_;
};

} // namespace

std::unique_ptr<ForestModel> ForestModel::fit(const ClassifierSpec& spec, const Dataset& ds,
                                              std::uint64_t seed) {
    auto m = std::make_unique<ForestModel>();
    const int n_trees = spec.get_int("n_estimators", 100);
    if (n_trees < 1) throw std::invalid_argument("random_forest: n_estimators must be >= 1");
    const std::string mf = spec.get_string("max_features", "sqrt");
    int max_features;
    if (mf == "sqrt")
        max_features = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(ds.cols()))));
    else if (mf == "all")
        max_features = static_cast<int>(ds.cols());
    else
        throw std::invalid_argument("random_forest: max_features must be 'sqrt' or 'all'");
    const int max_depth = 24;
    m->n_features_ = ds.cols();

    std::vector<std::vector<int>> sorted_rows(static_cast<std::size_t>(ds.cols()));
    for (Index f = 0; f < ds.cols(); ++f) {
        auto& order = sorted_rows[static_cast<std::size_t>(f)];
        order.resize(static_cast<std::size_t>(ds.rows()));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double xa = ds.X(a, f), xb = ds.X(b, f);
            return xa != xb ? xa < xb : a < b;
        });
    }

    const std::size_t n = static_cast<std::size_t>(ds.rows());
    m->trees.reserve(static_cast<std::size_t>(n_trees));
    std::vector<long> weights(n);
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(mix64(seed, 0xf0e5u, static_cast<std::uint64_t>(t)));
        std::fill(weights.begin(), weights.end(), 0L);
        for (std::size_t draw = 0; draw < n; ++draw) ++weights[rng.below(n)];
        TreeBuilder builder(ds.X, ds.y, sorted_rows, max_features, max_depth, rng);
        m->trees.push_back(builder.build(weights));
    }
    return m;
}

Vec ForestModel::score_impl(const Mat& X) const {
    Vec out = Vec::Zero(X.rows());
    for (const auto& tree : trees) {
        for (Index r = 0; r < X.rows(); ++r) {
            int node = 0;
            while (tree[static_cast<std::size_t>(node)].feature >= 0) {
                const auto& nd = tree[static_cast<std::size_t>(node)];
                node = X(r, nd.feature) <= nd.threshold ? nd.left : nd.right;
            }
            out[r] += tree[static_cast<std::size_t>(node)].leaf_value;
        }
    }
    return out / static_cast<double>(trees.size());
}

nlohmann::json ForestModel::to_json() const {
    nlohmann::json jtrees = nlohmann::json::array();
    for (const auto& tree : trees) {
        nlohmann::json jt = nlohmann::json::array();
        for (const auto& nd : tree)
            jt.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.leaf_value});
        jtrees.push_back(std::move(jt));
    }
    return {{"algorithm", "random_forest"}, {"n_features", n_features_}, {"trees", jtrees}};
}

std::unique_ptr<ForestModel> ForestModel::load(const nlohmann::json& j) {
    auto m = std::make_unique<ForestModel>();
    m->n_features_ = j.at("n_features").get<Index>();
    for (const auto& jt : j.at("trees")) {
        std::vector<Node> tree;
        for (const auto& jn : jt)
            tree.push_back({jn.at(0).get<int>(), jn.at(1).get<double>(), jn.at(2).get<int>(),
                            jn.at(3).get<int>(), jn.at(4).get<double>()});
        m->trees.push_back(std::move(tree));
    }
    return m;
}

} // namespace bnn::ml::detail
