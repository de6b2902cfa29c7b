#pragma once

#include "bnn/info/probability.hpp"
#include "bnn/types.hpp"

namespace bnn::info {

// Order of the generalized entropy / information distance family. alpha = 1
// routes to the Shannon / Kullback-Leibler limits.
struct MetricOrder {
    double alpha;

    explicit MetricOrder(double a) : alpha(a) {
        if (!(a > 0)) throw std::invalid_argument("MetricOrder: alpha must be > 0");
    }
};

// H_a(p) = 1/(1-a) * log2(sum p_i^a), in bits. Zero entries contribute nothing.
double generalized_entropy(const ProbabilitySample& p, MetricOrder order);

// H_1(p) = -sum p_i log2 p_i, with 0 log 0 = 0.
double shannon_entropy(const ProbabilitySample& p);

// D_a(P||Q) = 1/(a-1) * log2(sum p_i^a q_i^(1-a)) over a continuous pair.
// Asymmetric. Every q_i must be positive; every p_i must be positive too when
// alpha < 1 (both vectors then appear under fractional powers whose zero
// terms would silently drop mass).
double info_divergence(const Arr& p, const Arr& q, MetricOrder order);

// D_1(P||Q) = sum p_i log2(p_i / q_i); the alpha -> 1 limit of the above.
double kl_divergence(const Arr& p, const Arr& q);

// D_a(P, Q) = D_a(P||Q) + D_a(Q||P). Symmetric; needs both vectors strictly
// positive.
double info_distance(const Arr& p, const Arr& q, MetricOrder order);

} // namespace bnn::info
