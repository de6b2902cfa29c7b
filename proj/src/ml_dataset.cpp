#include "bnn/ml/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bnn/info/probability.hpp"
#include "bnn/rng.hpp"

namespace bnn::ml {

std::string to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::count: return "count";
        case FeatureKind::sum: return "sum";
        case FeatureKind::sample: return "sample";
    }
    throw std::logic_error("unreachable");
}

FeatureKind feature_kind_from_string(const std::string& name) {
    if (name == "count") return FeatureKind::count;
    if (name == "sum") return FeatureKind::sum;
    if (name == "sample") return FeatureKind::sample;
    throw std::invalid_argument("unknown feature kind: " + name);
}

Vec extract_features(const sim::ArrivalTrace& trace, FeatureKind kind) {
    const Index n = static_cast<Index>(trace.bins.size());
    switch (kind) {
        case FeatureKind::count: {
            Vec v(n);
            for (Index i = 0; i < n; ++i) v[i] = trace.bins[i];
            return v;
        }
        case FeatureKind::sum: {
            Vec v(n);
            double acc = 0.0;
            for (Index i = 0; i < n; ++i) {
                acc += trace.bins[i];
                v[i] = acc;
            }
            return v;
        }
        case FeatureKind::sample:
            return info::to_probability_sample(trace).values().matrix();
    }
    throw std::logic_error("unreachable");
}

void Dataset::validate() const {
    if (X.rows() != y.size())
        throw std::invalid_argument("Dataset: row count must equal label count");
    for (Index i = 0; i < y.size(); ++i)
        if (y[i] != 0 && y[i] != 1)
            throw std::invalid_argument("Dataset: labels must be 0 (attack) or 1 (normal)");
}

Dataset Dataset::take(const std::vector<Index>& row_ids) const {
    Dataset out;
    out.kind = kind;
    out.sampling_period = sampling_period;
    out.X.resize(static_cast<Index>(row_ids.size()), X.cols());
    out.y.resize(static_cast<Index>(row_ids.size()));
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
        out.X.row(static_cast<Index>(i)) = X.row(row_ids[i]);
        out.y[static_cast<Index>(i)] = y[row_ids[i]];
    }
    return out;
}

Preprocessor Preprocessor::fit(const std::vector<Vec>& raw) {
    if (raw.empty()) throw std::invalid_argument("preprocess: empty collection");
    Preprocessor p;
    for (const Vec& v : raw) p.pad_length = std::max(p.pad_length, v.size());

    Mat padded = Mat::Zero(static_cast<Index>(raw.size()), p.pad_length);
    for (std::size_t i = 0; i < raw.size(); ++i)
        padded.row(static_cast<Index>(i)).head(std::min(raw[i].size(), p.pad_length)) =
            raw[i].head(std::min(raw[i].size(), p.pad_length));

    Index first = -1, last = -1;
    for (Index c = 0; c < padded.cols(); ++c)
        if ((padded.col(c).array() != 0.0).any()) {
            if (first < 0) first = c;
            last = c;
        }
    if (first < 0)
        throw std::invalid_argument("preprocess: every column is all-zero (empty dataset)");
    p.keep_begin = first;
    p.keep_end = last + 1;

    const Index kept = p.keep_end - p.keep_begin;
    p.col_mean.resize(kept);
    p.col_scale.resize(kept);
    const double n = static_cast<double>(padded.rows());
    for (Index c = 0; c < kept; ++c) {
        const auto col = padded.col(p.keep_begin + c).array();
        const double m = col.sum() / n;
        const double sd = std::sqrt((col - m).square().sum() / n);
        p.col_mean[c] = m;
        p.col_scale[c] = sd > 1e-12 ? sd : 1.0; // constant column: centered, scale 1
    }
    return p;
}

Mat Preprocessor::transform(const std::vector<Vec>& raw) const {
    const Index kept = keep_end - keep_begin;
    Mat out = Mat::Zero(static_cast<Index>(raw.size()), kept);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        Vec padded = Vec::Zero(pad_length);
        const Index take = std::min(raw[i].size(), pad_length);
        padded.head(take) = raw[i].head(take);
        out.row(static_cast<Index>(i)) =
            ((padded.segment(keep_begin, kept) - col_mean).array() / col_scale.array())
                .matrix()
                .transpose();
    }
    return out;
}

PreprocessResult preprocess(const std::vector<Vec>& raw, std::vector<int> labels,
                            FeatureKind kind, double sampling_period) {
    if (raw.size() != labels.size())
        throw std::invalid_argument("preprocess: one label per feature vector required");
    PreprocessResult r{.dataset = {}, .stats = Preprocessor::fit(raw)};
    r.dataset.X = r.stats.transform(raw);
    r.dataset.y = Eigen::Map<const IntVec>(labels.data(), static_cast<Index>(labels.size()));
    r.dataset.kind = kind;
    r.dataset.sampling_period = sampling_period;
    r.dataset.validate();
    return r;
}

namespace {

std::vector<Index> shuffled_class_rows(const IntVec& labels, int cls, Rng& rng) {
    std::vector<Index> rows;
    for (Index i = 0; i < labels.size(); ++i)
        if (labels[i] == cls) rows.push_back(i);
    for (std::size_t i = rows.size(); i > 1; --i)
        std::swap(rows[i - 1], rows[rng.below(i)]);
    return rows;
}

} // namespace

std::pair<std::vector<Index>, std::vector<Index>>
stratified_split_indices(const IntVec& labels, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must lie in (0, 1)");
    Rng rng(mix64(seed, 0x5917));
    std::vector<Index> train, test;
    for (int cls : {0, 1}) {
        auto rows = shuffled_class_rows(labels, cls, rng);
        if (rows.empty()) continue;
        auto n_test = static_cast<std::size_t>(
            std::llround((1.0 - train_fraction) * static_cast<double>(rows.size())));
        if (rows.size() >= 2) {
            // keep the class represented on both sides
            n_test = std::clamp<std::size_t>(n_test, 1, rows.size() - 1);
        } else {
            n_test = std::min<std::size_t>(n_test, 1);
        }
        for (std::size_t i = 0; i < rows.size(); ++i)
            (i < n_test ? test : train).push_back(rows[i]);
    }
    if (train.empty() || test.empty())
        throw std::invalid_argument("split: a split would be empty");
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
    ds.validate();
    const auto [train_rows, test_rows] = stratified_split_indices(ds.y, train_fraction, seed);
    return {ds.take(train_rows), ds.take(test_rows)};
}

std::vector<int> stratified_fold_ids(const IntVec& labels, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k-fold: k must be >= 2");
    std::vector<int> fold(static_cast<std::size_t>(labels.size()), -1);
    Rng rng(mix64(seed, 0xf01d5));
    for (int cls : {0, 1}) {
        const auto rows = shuffled_class_rows(labels, cls, rng);
        if (rows.empty()) continue;
        if (rows.size() < static_cast<std::size_t>(k))
            throw std::invalid_argument(
                "k-fold: a class has fewer members than folds (some fold would lack it)");
        for (std::size_t i = 0; i < rows.size(); ++i)
            fold[static_cast<std::size_t>(rows[i])] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return fold;
}

} // namespace bnn::ml
