#include <stdexcept>

#include "bnn/ml/evaluate.hpp"
#include "bnn/rng.hpp"
#include "test_util.hpp"

using namespace bnn;
using namespace bnn::ml;

namespace {

// independent oracle: fraction of positive-negative score pairs correctly
// ordered, ties counted half (the Mann-Whitney U statistic, normalized)
double mann_whitney(const Vec& scores, const IntVec& labels) {
    double u = 0.0;
    long np = 0, nn = 0;
    for (Index i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        ++np;
        for (Index j = 0; j < labels.size(); ++j) {
            if (labels[j] == 1) continue;
            if (scores[i] > scores[j])
                u += 1.0;
            else if (scores[i] == scores[j])
                u += 0.5;
        }
    }
    for (Index j = 0; j < labels.size(); ++j) nn += labels[j] == 0 ? 1 : 0;
    return u / (static_cast<double>(np) * static_cast<double>(nn));
}

EvalReport from_counts(long tp, long tn, long fp, long fn) {
    EvalReport r;
    r.confusion = {tp, tn, fp, fn};
    apply_confusion_metrics(r);
    return r;
}

void worked_example() {
    const EvalReport r = from_counts(3, 4, 1, 2);
    CHECK(r.accuracy == 0.7);
    CHECK(r.precision == 0.75);
    CHECK(r.recall == 0.6);
    CHECK_NEAR(r.f1, 2.0 / 3.0, 1e-15);
    CHECK(r.specificity == 0.8);
    CHECK_NEAR(r.fpr, 0.2, 1e-15);
    CHECK(r.fpr == 1.0 - r.specificity); // definitional, bit-exact
}

void confusion_properties() {
    Rng rng(5);
    for (int it = 0; it < 300; ++it) {
        const EvalReport r =
            from_counts(static_cast<long>(rng.below(20)), static_cast<long>(rng.below(20)),
                        static_cast<long>(rng.below(20)), static_cast<long>(rng.below(20)));
        if (r.confusion.total() == 0) continue;
        CHECK(r.fpr == 1.0 - r.specificity);
        if (r.precision + r.recall > 0) {
            CHECK_NEAR(r.f1, 2.0 * r.precision * r.recall / (r.precision + r.recall), 1e-15);
            CHECK(r.f1 >= std::min(r.precision, r.recall) - 1e-12);
            CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-12);
        }
        for (double v : {r.accuracy, r.precision, r.recall, r.f1, r.specificity, r.fpr}) {
            CHECK(v >= 0.0 && v <= 1.0);
        }
    }
}

void confusion_at_half_convention() {
    Vec s(4);
    s << 0.5, 0.49, 0.51, 0.5;
    IntVec y(4);
    y << 1, 0, 1, 0;
    const ConfusionCounts c = confusion_at_half(s, y);
    CHECK(c.tp == 2); // 0.5 counts as a normal prediction
    CHECK(c.fp == 1);
    CHECK(c.tn == 1);
    CHECK(c.fn == 0);
    Vec bad(2);
    bad << 0.5, 0.5;
    IntVec short_y(1);
    short_y << 1;
    CHECK_THROWS(std::invalid_argument, confusion_at_half(bad, short_y));
}

void perfect_and_random_ranking() {
    Vec s(6);
    s << 0.9, 0.8, 0.7, 0.3, 0.2, 0.1;
    IntVec y(6);
    y << 1, 1, 1, 0, 0, 0;
    CHECK_NEAR(auroc(s, y), 1.0, 1e-15);

    Rng rng(6);
    const Index n = 10000;
    Vec rs(n);
    IntVec ry(n);
    for (Index i = 0; i < n; ++i) {
        rs[i] = rng.uniform();
        ry[i] = i % 2;
    }
    CHECK_NEAR(auroc(rs, ry), 0.5, 0.02);
}

void trapezoid_equals_pairwise_ranking() {
    Rng rng(7);
    for (int it = 0; it < 100; ++it) {
        const Index n = 10 + static_cast<Index>(rng.below(150));
        Vec s(n);
        IntVec y(n);
        bool both = false;
        do {
            for (Index i = 0; i < n; ++i) {
                // plenty of ties: scores drawn from a small discrete set half the time
                s[i] = rng.bernoulli(0.5) ? rng.uniform()
                                          : static_cast<double>(rng.below(5)) / 4.0;
                y[i] = rng.bernoulli(0.3) ? 1 : 0;
            }
            both = (y.array() == 1).any() && (y.array() == 0).any();
        } while (!both);
        CHECK_NEAR(auroc(s, y), mann_whitney(s, y), 1e-9);
    }
}

void curve_shapes() {
    Rng rng(8);
    Vec s(200);
    IntVec y(200);
    for (Index i = 0; i < s.size(); ++i) {
        y[i] = rng.bernoulli(0.4) ? 1 : 0;
        s[i] = 0.3 * rng.uniform() + 0.5 * y[i];
    }
    const EvalReport r = evaluate(s, y);
    CHECK(r.auroc.has_value() && r.auprc.has_value());
    CHECK(*r.auroc >= 0.0 && *r.auroc <= 1.0);
    CHECK(*r.auprc >= 0.0 && *r.auprc <= 1.0);

    CHECK(r.roc.front().fpr == 0.0 && r.roc.front().tpr == 0.0);
    CHECK(r.roc.back().fpr == 1.0 && r.roc.back().tpr == 1.0);
    bool monotone = true;
    for (std::size_t i = 1; i < r.roc.size(); ++i)
        if (r.roc[i].fpr < r.roc[i - 1].fpr || r.roc[i].tpr < r.roc[i - 1].tpr)
            monotone = false;
    CHECK(monotone);

    CHECK(r.pr.front().recall == 0.0);
    CHECK(r.pr.front().precision == r.pr[1].precision); // anchored at first precision
    CHECK(r.pr.back().recall == 1.0);
    bool recall_sorted = true;
    for (std::size_t i = 1; i < r.pr.size(); ++i)
        if (r.pr[i].recall < r.pr[i - 1].recall) recall_sorted = false;
    CHECK(recall_sorted);
}

void label_flip_symmetry() {
    Rng rng(9);
    for (int it = 0; it < 100; ++it) {
        const Index n = 50;
        Vec s(n);
        IntVec y(n), flipped(n);
        for (Index i = 0; i < n; ++i) {
            do {
                s[i] = rng.uniform();
            } while (s[i] == 0.5);
            y[i] = rng.bernoulli(0.5) ? 1 : 0;
            flipped[i] = 1 - y[i];
        }
        const EvalReport a = evaluate(s, y);
        const EvalReport b = evaluate((1.0 - s.array()).matrix(), flipped);
        CHECK_NEAR(a.accuracy, b.accuracy, 1e-15);
        // precision/recall swap with their negative-class counterparts
        const double npv =
            a.confusion.tn + a.confusion.fn > 0
                ? static_cast<double>(a.confusion.tn) /
                      static_cast<double>(a.confusion.tn + a.confusion.fn)
                : 0.0;
        CHECK_NEAR(b.precision, npv, 1e-15);
        CHECK_NEAR(b.recall, a.specificity, 1e-15);
    }
}

void degenerate_labels() {
    Vec s(3);
    s << 0.2, 0.6, 0.9;
    IntVec y(3);
    y << 1, 1, 1;
    const EvalReport r = evaluate(s, y);
    CHECK(!r.auroc.has_value());
    CHECK(!r.auprc.has_value());
    CHECK(r.recall == 2.0 / 3.0); // other metrics still defined
    CHECK_THROWS(std::domain_error, auroc(s, y));
}

} // namespace

int main() {
    worked_example();
    confusion_properties();
    confusion_at_half_convention();
    perfect_and_random_ranking();
    trapezoid_equals_pairwise_ranking();
    curve_shapes();
    label_flip_symmetry();
    degenerate_labels();
    return testutil::summary("test_eval");
}
