#include "bnn/ml/evaluate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bnn::ml {

ConfusionCounts confusion_at_half(const Vec& scores, const IntVec& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("evaluate: scores and labels differ in length");
    ConfusionCounts c;
    for (Index i = 0; i < scores.size(); ++i) {
        const bool predicted_normal = scores[i] >= 0.5;
        if (labels[i] == 1)
            predicted_normal ? ++c.tp : ++c.fn;
        else
            predicted_normal ? ++c.fp : ++c.tn;
    }
    return c;
}

void apply_confusion_metrics(EvalReport& r) {
    const auto& c = r.confusion;
    const double total = static_cast<double>(c.total());
    r.accuracy = total > 0 ? static_cast<double>(c.tp + c.tn) / total : 0.0;
    r.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    r.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    r.f1 = r.precision + r.recall > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                                      : 0.0;
    r.specificity =
        c.tn + c.fp > 0 ? static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp) : 0.0;
    r.fpr = 1.0 - r.specificity;
}

namespace {

struct SweepState {
    std::vector<Index> order;   // by descending score
    long positives = 0;
    long negatives = 0;
};

SweepState sorted_sweep(const Vec& scores, const IntVec& labels) {
    SweepState s;
    s.order.resize(static_cast<std::size_t>(scores.size()));
    std::iota(s.order.begin(), s.order.end(), Index{0});
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](Index a, Index b) { return scores[a] > scores[b]; });
    for (Index i = 0; i < labels.size(); ++i)
        labels[i] == 1 ? ++s.positives : ++s.negatives;
    return s;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double area = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        area += (x[i] - x[i - 1]) * 0.5 * (y[i] + y[i - 1]);
    return area;
}

} // namespace

EvalReport evaluate(const Vec& scores, const IntVec& labels) {
    EvalReport r;
    r.confusion = confusion_at_half(scores, labels);
    apply_confusion_metrics(r);

    const SweepState s = sorted_sweep(scores, labels);
    if (s.positives == 0 || s.negatives == 0) return r; // curves/areas undefined

    // group tied scores: one curve point per distinct threshold
    long tp = 0, fp = 0;
    std::vector<double> roc_x{0.0}, roc_y{0.0};
    std::vector<double> pr_x, pr_y;
    for (std::size_t i = 0; i < s.order.size();) {
        std::size_t j = i;
        while (j < s.order.size() && scores[s.order[j]] == scores[s.order[i]]) {
            labels[s.order[j]] == 1 ? ++tp : ++fp;
            ++j;
        }
        i = j;
        roc_x.push_back(static_cast<double>(fp) / static_cast<double>(s.negatives));
        roc_y.push_back(static_cast<double>(tp) / static_cast<double>(s.positives));
        pr_x.push_back(static_cast<double>(tp) / static_cast<double>(s.positives));
        pr_y.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
    }

    for (std::size_t i = 0; i < roc_x.size(); ++i) r.roc.push_back({roc_x[i], roc_y[i]});
    r.auroc = trapezoid(roc_x, roc_y);

    // anchor: precision at recall 0 takes the first attainable precision
    r.pr.push_back({0.0, pr_y.front()});
    for (std::size_t i = 0; i < pr_x.size(); ++i) r.pr.push_back({pr_x[i], pr_y[i]});
    std::vector<double> prx{0.0}, pry{pr_y.front()};
    prx.insert(prx.end(), pr_x.begin(), pr_x.end());
    pry.insert(pry.end(), pr_y.begin(), pr_y.end());
    r.auprc = trapezoid(prx, pry);
    return r;
}

double auroc(const Vec& scores, const IntVec& labels) {
    const EvalReport r = evaluate(scores, labels);
    if (!r.auroc)
        throw std::domain_error("auroc: undefined for single-class labels");
    return *r.auroc;
}

} // namespace bnn::ml
