#include "bnn/ml/grid_search.hpp"

#include <numeric>
#include <stdexcept>

#include "bnn/ml/evaluate.hpp"
#include "bnn/rng.hpp"
#include "bnn/stats.hpp"

namespace bnn::ml {

ParamGrid default_grid(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::logistic_regression:
            return {{"fit_intercept", {true, false}}};
        case Algorithm::knn:
            return {{"n_neighbors", {1, 3, 5, 11}},
                    {"weights", {std::string("uniform"), std::string("distance")}}};
        case Algorithm::svm:
            return {{"C", {0.1, 1.0, 10.0}},
                    {"kernel", {std::string("linear"), std::string("rbf")}},
                    {"max_iter", {1000, 10000}}};
        case Algorithm::random_forest:
            return {{"n_estimators", {50, 200}},
                    {"max_features", {std::string("sqrt"), std::string("all")}}};
        case Algorithm::mlp:
            return {{"hidden_layer_sizes",
                     {std::string("10"), std::string("50"), std::string("50,25")}},
                    {"learning_rate_init", {1e-3, 1e-2}}};
    }
    throw std::logic_error("unreachable");
}

std::vector<ClassifierSpec> expand_grid(Algorithm algorithm, const ParamGrid& grid) {
    if (grid.empty()) throw std::invalid_argument("grid search: empty grid");
    std::vector<ParamMap> rows{{}};
    for (const auto& [name, values] : grid) {
        if (values.empty())
            throw std::invalid_argument("grid search: parameter '" + name + "' has no values");
        std::vector<ParamMap> expanded;
        expanded.reserve(rows.size() * values.size());
        for (const auto& row : rows)
            for (const auto& v : values) {
                ParamMap next = row;
                next[name] = v;
                expanded.push_back(std::move(next));
            }
        rows = std::move(expanded);
    }
    std::vector<ClassifierSpec> specs;
    specs.reserve(rows.size());
    for (auto& row : rows) specs.push_back({algorithm, std::move(row)});
    return specs;
}

namespace {

// smaller-model tie-break: fewer neighbors / trees / hidden units
long model_size(const ClassifierSpec& spec) {
    switch (spec.algorithm) {
        case Algorithm::knn: return spec.get_int("n_neighbors", 5);
        case Algorithm::random_forest: return spec.get_int("n_estimators", 100);
        case Algorithm::mlp: {
            long units = 0;
            std::string text = spec.get_string("hidden_layer_sizes", "50");
            std::size_t pos = 0;
            while (pos < text.size()) {
                std::size_t next = text.find(',', pos);
                if (next == std::string::npos) next = text.size();
                units += std::stol(text.substr(pos, next - pos));
                pos = next + 1;
            }
            return units;
        }
        default: return 0;
    }
}

} // namespace

GridSearchResult grid_search_cv(const Dataset& train_set, Algorithm algorithm,
                                const ParamGrid& grid, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("grid search: k must be >= 2");
    train_set.validate();
    const auto specs = expand_grid(algorithm, grid);
    const auto fold_of = stratified_fold_ids(train_set.y, k, mix64(seed, 0xcf01d));

    std::vector<std::vector<Index>> fold_train(static_cast<std::size_t>(k));
    std::vector<std::vector<Index>> fold_val(static_cast<std::size_t>(k));
    for (Index i = 0; i < train_set.rows(); ++i)
        for (int f = 0; f < k; ++f)
            (fold_of[static_cast<std::size_t>(i)] == f ? fold_val : fold_train)[
                static_cast<std::size_t>(f)]
                .push_back(i);

    GridSearchResult result;
    for (std::size_t cell_id = 0; cell_id < specs.size(); ++cell_id) {
        GridSearchCell cell{specs[cell_id], 0.0, {}, 0};
        for (int f = 0; f < k; ++f) {
            const Dataset tr = train_set.take(fold_train[static_cast<std::size_t>(f)]);
            const Dataset va = train_set.take(fold_val[static_cast<std::size_t>(f)]);
            const bool val_has_both =
                (va.y.array() == 0).any() && (va.y.array() == 1).any();
            if (!val_has_both || (tr.y.array() == 0).count() == 0 ||
                (tr.y.array() == 1).count() == 0) {
                ++cell.skipped_folds;
                continue;
            }
            const auto model =
                train(cell.spec, tr, mix64(seed, cell_id, static_cast<std::uint64_t>(f)));
            cell.fold_aurocs.push_back(auroc(model->predict_scores(va.X), va.y));
        }
        if (cell.fold_aurocs.empty())
            throw std::runtime_error("grid search: every fold was degenerate");
        cell.mean_auroc = mean(cell.fold_aurocs);
        result.cells.push_back(std::move(cell));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.cells.size(); ++i) {
        const auto& a = result.cells[i];
        const auto& b = result.cells[best];
        if (a.mean_auroc > b.mean_auroc ||
            (a.mean_auroc == b.mean_auroc && model_size(a.spec) < model_size(b.spec)))
            best = i;
    }
    result.best = result.cells[best].spec;
    result.best_mean_auroc = result.cells[best].mean_auroc;
    return result;
}

} // namespace bnn::ml
