#pragma once

#include <optional>
#include <vector>

#include "bnn/types.hpp"

namespace bnn::ml {

struct ConfusionCounts {
    long tp = 0;
    long tn = 0;
    long fp = 0;
    long fn = 0;
    long total() const { return tp + tn + fp + fn; }
};

struct RocPoint {
    double fpr;
    double tpr;
};

struct PrPoint {
    double recall;
    double precision;
};

struct EvalReport {
    ConfusionCounts confusion;
    double accuracy = 0.0;
    double precision = 0.0;   // 0 when no positive predictions
    double recall = 0.0;      // 0 when no positives
    double f1 = 0.0;          // 0 when precision + recall == 0
    double specificity = 0.0; // 0 when no negatives
    double fpr = 0.0;         // 1 - specificity, by definition
    std::vector<RocPoint> roc; // threshold sweep, starts (0,0), ends (1,1)
    std::vector<PrPoint> pr;   // first point anchors precision at recall 0
    std::optional<double> auroc; // empty when labels are single-class
    std::optional<double> auprc;
};

// Positive class is label 1 ("normal traffic"); hard labels use score >= 0.5.
ConfusionCounts confusion_at_half(const Vec& scores, const IntVec& labels);

// Fills the scalar metrics of a report from its counts.
void apply_confusion_metrics(EvalReport& report);

// Full report: confusion at 0.5, scalar metrics, ROC / PR curves over every
// distinct score threshold, trapezoidal areas. Works for any score vector;
// AUROC/AUPRC stay empty when only one class is present.
EvalReport evaluate(const Vec& scores, const IntVec& labels);

// Trapezoidal area under the ROC curve; throws std::domain_error when the
// labels are single-class (the area is undefined).
double auroc(const Vec& scores, const IntVec& labels);

} // namespace bnn::ml
