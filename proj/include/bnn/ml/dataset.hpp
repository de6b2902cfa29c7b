#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bnn/sim/trace.hpp"
#include "bnn/types.hpp"

namespace bnn::ml {

enum class FeatureKind { count, sum, sample };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& name);

// count: the per-bin arrival sequence itself; sum: its prefix sums; sample:
// the probability sample over observed per-bin counts.
Vec extract_features(const sim::ArrivalTrace& trace, FeatureKind kind);

// Labeled feature matrix. Label 0 = under attack, 1 = normal traffic.
struct Dataset {
    Mat X;
    IntVec y;
    FeatureKind kind = FeatureKind::count;
    double sampling_period = 0.0;

    Index rows() const { return X.rows(); }
    Index cols() const { return X.cols(); }
    Dataset take(const std::vector<Index>& row_ids) const;
    void validate() const;
};

// Column statistics learned from training rows only. transform() applies the
// stored padding window, zero-column trim and standardization to any batch,
// so test rows never touch the statistics.
struct Preprocessor {
    Index pad_length = 0;   // raw vectors are right-padded (or cut) to this
    Index keep_begin = 0;   // column window surviving the all-zero trim
    Index keep_end = 0;
    Vec col_mean;
    Vec col_scale;          // 1 where a column was constant

    static Preprocessor fit(const std::vector<Vec>& raw);
    Mat transform(const std::vector<Vec>& raw) const;
};

struct PreprocessResult {
    Dataset dataset;
    Preprocessor stats;
};

// Pads ragged vectors with zeros, trims all-zero edge columns (interior
// all-zero columns stay), standardizes every kept column to mean 0 / sd 1.
PreprocessResult preprocess(const std::vector<Vec>& raw, std::vector<int> labels,
                            FeatureKind kind, double sampling_period);

// Seeded, class-stratified row partition; both splits keep both labels
// whenever a class has at least two members.
std::pair<std::vector<Index>, std::vector<Index>>
stratified_split_indices(const IntVec& labels, double train_fraction, std::uint64_t seed);

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed);

// Stratified k-fold assignment, one fold id per row; every row validates
// exactly once. Throws when a class has fewer than k members.
std::vector<int> stratified_fold_ids(const IntVec& labels, int k, std::uint64_t seed);

} // namespace bnn::ml
