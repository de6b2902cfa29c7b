#include "bnn/info/probability.hpp"

#include <vector>

namespace bnn::info {

ProbabilitySample::ProbabilitySample(Arr probs) : probs_(std::move(probs)) {
    if (probs_.size() == 0)
        throw std::invalid_argument("ProbabilitySample: must not be empty");
    if ((probs_ < 0.0).any() || (probs_ > 1.0).any())
        throw std::invalid_argument("ProbabilitySample: entries must lie in [0, 1]");
    if (std::abs(probs_.sum() - 1.0) > 1e-9)
        throw std::invalid_argument("ProbabilitySample: entries must sum to 1");
}

ProbabilitySample to_probability_sample(const sim::ArrivalTrace& trace) {
    if (trace.bins.empty())
        throw std::invalid_argument("to_probability_sample: trace must not be empty");
    Arr counts = Arr::Zero(trace.n_legit + 1);
    for (int b : trace.bins) {
        if (b < 0 || b > trace.n_legit)
            throw std::domain_error(
                "to_probability_sample: bin value outside [0, n_legit]");
        counts[b] += 1.0;
    }
    return ProbabilitySample(counts / static_cast<double>(trace.bins.size()));
}

ContinuousPair make_continuous(const ProbabilitySample& p, const ProbabilitySample& q) {
    const Index len = std::min(p.size(), q.size());
    std::vector<double> kp, kq;
    kp.reserve(len);
    kq.reserve(len);
    for (Index i = 0; i < len; ++i) {
        if (p[i] != 0.0 && q[i] != 0.0) {
            kp.push_back(p[i]);
            kq.push_back(q[i]);
        }
    }
    if (kp.empty()) throw NoOverlapError();
    ContinuousPair out;
    out.p = Eigen::Map<const Arr>(kp.data(), static_cast<Index>(kp.size()));
    out.q = Eigen::Map<const Arr>(kq.data(), static_cast<Index>(kq.size()));
    return out;
}

} // namespace bnn::info
