#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "warpdet/detect.hpp"
#include "warpdet/sequence.hpp"

namespace warpdet {

// Empirical ROC curve; one point per tie block of scores, (0,0) and (1,1)
// included.
struct RocCurve {
    std::vector<double> thresholds;
    std::vector<double> tpr;
    std::vector<double> fpr;
};

// Trapezoidal area under the empirical ROC. Labels are +-1 (any value > 0
// counts as positive); tied scores cross the threshold together. Both
// classes must be present.
double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels,
               RocCurve* curve = nullptr);

// Maximum F1 over all score thresholds; needs at least one positive.
double max_f1(const std::vector<double>& scores, const std::vector<int>& labels);

// Fraction of labels predicted correctly at threshold 0.
double accuracy_at_zero(const std::vector<double>& scores, const std::vector<int>& labels);

struct Metrics {
    double auc = 0.0;
    double max_f1 = 0.0;
    double accuracy = 0.0;
};

// k-fold partition: test_ids[f] lists the held-out ids of fold f. Sizes
// differ by at most one; a deterministic function of (ids, seed).
struct FoldPlan {
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::string>> test_ids;
};

FoldPlan make_folds(const std::vector<std::string>& ids, int k, std::uint64_t seed);

// Sequence-level scoring of the continuous task: each detection contributes
// its score; the label is 1 when the detected span reaches union-overlap
// >= 0.5 with the ground truth, 0 otherwise (decoys, passed as nullopt,
// always count as 0). Accuracy reports the hit rate over truth-bearing
// sequences.
Metrics continuous_eval(const std::vector<DetectionResult>& detections,
                        const std::vector<std::optional<Span>>& truths);

}  // namespace warpdet
