#include "bnn/info/metrics.hpp"

#include <cmath>

namespace bnn::info {

namespace {

const double kLn2 = std::log(2.0);

void require_same_shape(const Arr& p, const Arr& q) {
    if (p.size() == 0 || p.size() != q.size())
        throw std::invalid_argument("divergence: need two non-empty equal-length vectors");
}

void require_positive(const Arr& v, const char* which) {
    if ((v <= 0.0).any())
        throw ContinuityError(which);
}

} // namespace

double generalized_entropy(const ProbabilitySample& p, MetricOrder order) {
    if (order.alpha == 1.0) return shannon_entropy(p);
    const double s = p.values().pow(order.alpha).sum();
    return std::log2(s) / (1.0 - order.alpha);
}

double shannon_entropy(const ProbabilitySample& p) {
    const Arr& v = p.values();
    return -(v > 0.0).select(v * v.log(), 0.0).sum() / kLn2;
}

double info_divergence(const Arr& p, const Arr& q, MetricOrder order) {
    if (order.alpha == 1.0) return kl_divergence(p, q);
    require_same_shape(p, q);
    require_positive(q, "info_divergence: q has a zero entry; run make_continuous first");
    if (order.alpha < 1.0)
        require_positive(p, "info_divergence: p has a zero entry; run make_continuous first");
    const double s = (p.pow(order.alpha) * q.pow(1.0 - order.alpha)).sum();
    if (!(s > 0.0))
        throw ContinuityError("info_divergence: zero-mass distribution");
    return std::log2(s) / (order.alpha - 1.0);
}

double kl_divergence(const Arr& p, const Arr& q) {
    require_same_shape(p, q);
    require_positive(q, "kl_divergence: q has a zero entry; run make_continuous first");
    return (p > 0.0).select(p * (p / q).log(), 0.0).sum() / kLn2;
}

double info_distance(const Arr& p, const Arr& q, MetricOrder order) {
    return info_divergence(p, q, order) + info_divergence(q, p, order);
}

} // namespace bnn::info
