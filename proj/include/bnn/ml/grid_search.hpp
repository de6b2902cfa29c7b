#pragma once

#include <cstdint>
#include <vector>

#include "bnn/ml/dataset.hpp"
#include "bnn/ml/model.hpp"

namespace bnn::ml {

using ParamGrid = std::map<std::string, std::vector<ParamValue>>;

// The search domains used throughout the evaluation; Table-style axes with
// small exhaustive value lists.
ParamGrid default_grid(Algorithm algorithm);

// Cartesian expansion in sorted-key / listed-value order (the "grid order"
// used for tie-breaking).
std::vector<ClassifierSpec> expand_grid(Algorithm algorithm, const ParamGrid& grid);

struct GridSearchCell {
    ClassifierSpec spec;
    double mean_auroc = 0.0;
    std::vector<double> fold_aurocs;
    int skipped_folds = 0; // validation folds with a single class
};

struct GridSearchResult {
    ClassifierSpec best;
    double best_mean_auroc = 0.0;
    std::vector<GridSearchCell> cells;
};

// Stratified k-fold cross validation over the expanded grid; the winner has
// the highest mean validation AUROC, ties broken by smaller model size, then
// by grid order.
GridSearchResult grid_search_cv(const Dataset& train_set, Algorithm algorithm,
                                const ParamGrid& grid, int k, std::uint64_t seed);

} // namespace bnn::ml
