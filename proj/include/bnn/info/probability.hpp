#pragma once

#include <stdexcept>
#include <utility>

#include "bnn/sim/trace.hpp"
#include "bnn/types.hpp"

namespace bnn::info {

// Discrete distribution over observed per-bin arrival counts: p[v] = P(x = v).
// Entries lie in [0, 1] and sum to 1 within 1e-9, checked on construction.
class ProbabilitySample {
public:
    explicit ProbabilitySample(Arr probs);

    const Arr& values() const { return probs_; }
    Index size() const { return probs_.size(); }
    double operator[](Index i) const { return probs_[i]; }

private:
    Arr probs_;
};

// Thrown when two distributions share no support, so no continuous pair
// exists; callers may treat this as maximal divergence.
struct NoOverlapError : std::runtime_error {
    NoOverlapError() : std::runtime_error("no common support between distributions") {}
};

// Thrown when a metric that requires strictly positive entries sees a zero.
struct ContinuityError : std::invalid_argument {
    explicit ContinuityError(const char* what) : std::invalid_argument(what) {}
};

// Strictly positive entry-aligned pair produced from two distributions by
// dropping every index where either is zero. The survivors keep their values,
// so the vectors generally no longer sum to 1; the information metrics
// consume them as-is.
struct ContinuousPair {
    Arr p;
    Arr q;
};

// Builds p[v] = #{bins equal to v} / #bins for v = 0..n_legit. Every bin value
// must lie in [0, n_legit].
ProbabilitySample to_probability_sample(const sim::ArrivalTrace& trace);

// Keeps index i iff p[i] != 0 and q[i] != 0, scanning the shared prefix of the
// two supports. Throws NoOverlapError when nothing survives.
ContinuousPair make_continuous(const ProbabilitySample& p, const ProbabilitySample& q);

} // namespace bnn::info
