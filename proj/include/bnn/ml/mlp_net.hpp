#pragma once

#include <vector>

#include "bnn/rng.hpp"
#include "bnn/types.hpp"

namespace bnn::ml {

// Small fully connected net: rectified-linear hidden layers, one logistic
// output unit, parameters flattened into a single vector so the optimizer and
// the finite-difference checks share one view.
struct MlpNet {
    std::vector<Index> sizes; // input, hidden..., 1
    Vec params;

    static MlpNet init(Index n_inputs, const std::vector<Index>& hidden, Rng& rng);

    Index param_count() const;

    // logits for a batch (rows = samples)
    Vec forward(const Mat& X) const;

    // sigmoid(logits)
    Vec scores(const Mat& X) const;

    // mean binary cross-entropy against y in {0,1}; fills grad (same layout
    // as params)
    double loss_and_grad(const Mat& X, const Vec& y, Vec& grad) const;
};

} // namespace bnn::ml
