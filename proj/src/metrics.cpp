#include "warpdet/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "warpdet/rng.hpp"

namespace warpdet {

namespace {

struct Counts {
    long pos = 0;
    long neg = 0;
};

Counts count_classes(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("metrics: scores/labels size mismatch");
    if (scores.empty()) throw std::invalid_argument("metrics: empty input");
    Counts c;
    for (int y : labels) (y > 0 ? c.pos : c.neg) += 1;
    return c;
}

// Indices sorted by score descending; equal scores stay grouped.
std::vector<std::size_t> descending_order(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
}

}  // namespace

double roc_auc(const std::vector<double>& scores, const std::vector<int>& labels,
               RocCurve* curve) {
    const Counts c = count_classes(scores, labels);
    if (c.pos == 0 || c.neg == 0)
        throw std::invalid_argument("roc_auc: both classes must be present");

    const auto order = descending_order(scores);
    if (curve) {
        curve->thresholds.clear();
        curve->tpr.assign(1, 0.0);
        curve->fpr.assign(1, 0.0);
    }

    double auc = 0.0;
    double tp = 0, fp = 0;
    double prev_tpr = 0.0, prev_fpr = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        // whole tie block crosses the threshold at once
        while (i < order.size() && scores[order[i]] == s) {
            (labels[order[i]] > 0 ? tp : fp) += 1;
            ++i;
        }
        const double tpr = tp / static_cast<double>(c.pos);
        const double fpr = fp / static_cast<double>(c.neg);
        auc += (fpr - prev_fpr) * 0.5 * (tpr + prev_tpr);
        if (curve) {
            curve->thresholds.push_back(s);
            curve->tpr.push_back(tpr);
            curve->fpr.push_back(fpr);
        }
        prev_tpr = tpr;
        prev_fpr = fpr;
    }
    return auc;
}

double max_f1(const std::vector<double>& scores, const std::vector<int>& labels) {
    const Counts c = count_classes(scores, labels);
    if (c.pos == 0) throw std::invalid_argument("max_f1: no positive labels");

    const auto order = descending_order(scores);
    double best = 0.0;
    double tp = 0, predicted = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            if (labels[order[i]] > 0) tp += 1;
            predicted += 1;
            ++i;
        }
        if (tp > 0) {
            const double precision = tp / predicted;
            const double recall = tp / static_cast<double>(c.pos);
            best = std::max(best, 2.0 * precision * recall / (precision + recall));
        }
    }
    return best;
}

double accuracy_at_zero(const std::vector<double>& scores, const std::vector<int>& labels) {
    count_classes(scores, labels);
    long correct = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted_pos = scores[i] > 0.0;
        if (predicted_pos == (labels[i] > 0)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(scores.size());
}

FoldPlan make_folds(const std::vector<std::string>& ids, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("make_folds: k must be positive");
    if (static_cast<int>(ids.size()) < k)
        throw std::invalid_argument("make_folds: fewer ids than folds");
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.test_ids.resize(k);
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        plan.test_ids[pos % k].push_back(ids[order[pos]]);
    for (auto& fold : plan.test_ids) std::sort(fold.begin(), fold.end());
    return plan;
}

Metrics continuous_eval(const std::vector<DetectionResult>& detections,
                        const std::vector<std::optional<Span>>& truths) {
    if (detections.size() != truths.size())
        throw std::invalid_argument("continuous_eval: detections/truths size mismatch");
    std::vector<double> scores;
    std::vector<int> labels;
    long hits = 0, with_truth = 0;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        scores.push_back(detections[i].score);
        bool hit = false;
        if (truths[i]) {
            ++with_truth;
            hit = span_overlap(Span{detections[i].start, detections[i].end}, *truths[i]) >= 0.5;
            if (hit) ++hits;
        }
        labels.push_back(hit ? 1 : -1);
    }
    Metrics m;
    m.auc = roc_auc(scores, labels);
    m.max_f1 = max_f1(scores, labels);
    m.accuracy = with_truth > 0 ? static_cast<double>(hits) / with_truth : 0.0;
    return m;
}

}  // namespace warpdet
