#include "warpdet/detect.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "warpdet/metrics.hpp"
#include "warpdet/rng.hpp"

#ifdef WARPDET_HAVE_FFTW
#include <fftw3.h>

#include <mutex>
#endif

namespace warpdet {

WindowGrid candidate_window_lengths(const std::vector<int>& event_lengths,
                                    int n_candidates) {
    if (event_lengths.empty())
        throw std::invalid_argument("candidate_window_lengths: empty length list");
    if (n_candidates < 1)
        throw std::invalid_argument("candidate_window_lengths: need at least 1 candidate");
    std::vector<int> sorted = event_lengths;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t last = sorted.size() - 1;

    WindowGrid grid;
    if (n_candidates == 1) {
        grid.lengths.push_back(sorted[last / 2]);
        return grid;
    }
    for (int i = 0; i < n_candidates; ++i) {
        const double q = static_cast<double>(i) / static_cast<double>(n_candidates - 1);
        const auto idx = static_cast<std::size_t>(std::llround(q * static_cast<double>(last)));
        grid.lengths.push_back(sorted[idx]);
    }
    grid.lengths.erase(std::unique(grid.lengths.begin(), grid.lengths.end()),
                       grid.lengths.end());
    return grid;
}

namespace {

#ifdef WARPDET_HAVE_FFTW
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Valid cross-correlation of x with the window taps w, summed over
// dimensions: out[s] = sum_d sum_tau x(d, s+tau) * w(d, tau).
std::vector<double> fft_correlate(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w) {
    const int M = static_cast<int>(x.cols());
    const int len = static_cast<int>(w.cols());
    const int D = static_cast<int>(x.rows());
    int F = 1;
    while (F < M) F <<= 1;
    const int FC = F / 2 + 1;

    std::vector<double> xin(F, 0.0), win(F, 0.0), corr(F, 0.0);
    std::vector<fftw_complex> xf(FC), wf(FC), prod(FC);
    fftw_plan plan_x, plan_w, plan_inv;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan_x = fftw_plan_dft_r2c_1d(F, xin.data(), xf.data(), FFTW_ESTIMATE);
        plan_w = fftw_plan_dft_r2c_1d(F, win.data(), wf.data(), FFTW_ESTIMATE);
        plan_inv = fftw_plan_dft_c2r_1d(F, prod.data(), corr.data(), FFTW_ESTIMATE);
    }

    std::vector<double> acc(M - len + 1, 0.0);
    for (int d = 0; d < D; ++d) {
        std::fill(xin.begin(), xin.end(), 0.0);
        std::fill(win.begin(), win.end(), 0.0);
        for (int m = 0; m < M; ++m) xin[m] = x(d, m);
        for (int m = 0; m < len; ++m) win[m] = w(d, m);
        fftw_execute(plan_x);
        fftw_execute(plan_w);
        for (int k = 0; k < FC; ++k) {
            prod[k][0] = xf[k][0] * wf[k][0] + xf[k][1] * wf[k][1];
            prod[k][1] = xf[k][1] * wf[k][0] - xf[k][0] * wf[k][1];
        }
        fftw_execute(plan_inv);
        for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += corr[s] / F;
    }
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan_x);
        fftw_destroy_plan(plan_w);
        fftw_destroy_plan(plan_inv);
    }
    return acc;
}
#endif

std::vector<int> usable_lengths(const WindowGrid& grid, int M) {
    std::vector<int> out;
    for (int len : grid.lengths)
        if (len >= 1 && len <= M) out.push_back(len);
    if (out.empty())
        throw std::invalid_argument("detect: all candidate window lengths exceed the sequence");
    return out;
}

struct BestSpan {
    bool valid = false;
    double score = -std::numeric_limits<double>::infinity();
    int start = 0;
    int len = 0;

    void consider(double v, int s, int l) {
        if (!valid || v > score ||
            (v == score && (s < start || (s == start && l < len)))) {
            valid = true;
            score = v;
            start = s;
            len = l;
        }
    }
};

DetectionResult argmax_spans(std::vector<ScoreRow>&& rows, bool keep_scores,
                             std::size_t evals) {
    BestSpan best;
    for (const auto& row : rows) {
        for (std::size_t s = 0; s < row.scores.size(); ++s)
            best.consider(row.scores[s], static_cast<int>(s) + 1, row.length);
    }
    DetectionResult result;
    result.start = best.start;
    result.end = best.start + best.len - 1;
    result.score = best.score;
    result.window_length_used = best.len;
    result.score_evals = evals;
    if (keep_scores) result.per_window_scores = std::move(rows);
    return result;
}

}  // namespace

std::vector<ScoreRow> warp_score_table(const Eigen::MatrixXd& x,
                                       const LinearModel& model, const MeanWarp& pbar,
                                       const WindowGrid& grid, bool use_fft,
                                       std::size_t* evals) {
    const int M = static_cast<int>(x.cols());
    std::vector<ScoreRow> rows;
    for (int len : usable_lengths(grid, M)) {
        const SpecializedModel sm = specialize_model(model, pbar, len);
        ScoreRow row;
        row.length = len;
        row.scores.resize(M - len + 1);
        if (use_fft) {
#ifdef WARPDET_HAVE_FFTW
            const std::vector<double> corr = fft_correlate(x, sm.m);
            for (std::size_t s = 0; s < corr.size(); ++s)
                row.scores[s] = corr[s] + sm.bias;
#else
            throw std::runtime_error("fft scoring requested but fftw support not built");
#endif
        } else {
            for (int s = 1; s <= M - len + 1; ++s) row.scores[s - 1] = score_window(x, s, sm);
        }
        if (evals) *evals += row.scores.size();
        rows.push_back(std::move(row));
    }
    return rows;
}

DetectionResult detect_continuous(const Sequence& x, const LinearModel& model,
                                  const MeanWarp& pbar, const WindowGrid& grid,
                                  const DetectOptions& opts) {
    x.validate();
    std::size_t evals = 0;
    auto rows = warp_score_table(x.data, model, pbar, grid, opts.use_fft, &evals);
    return argmax_spans(std::move(rows), opts.keep_scores, evals);
}

void write_score_table_csv(std::ostream& os, const std::vector<ScoreRow>& rows) {
    os << "length,start,score\n";
    for (const auto& row : rows) {
        for (std::size_t s = 0; s < row.scores.size(); ++s) {
            os << row.length << ',' << (s + 1) << ',';
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.12g", row.scores[s]);
            os << buf << '\n';
        }
    }
}

namespace {

Sequence event_segment(const Sequence& seq) {
    const Span span = *seq.event_span;
    Sequence out;
    out.id = seq.id + ":event";
    out.label = seq.label;
    out.data = seq.data.middleCols(span.start - 1, span.end - span.start + 1);
    return out;
}

std::vector<ScoreRow> bow_score_table(const CumulativeTable& table,
                                      const Eigen::VectorXd& w, double bias,
                                      const WindowGrid& grid, std::size_t* evals) {
    const int M = table.frames();
    const int K = table.K();
    std::vector<ScoreRow> rows;
    for (int len : usable_lengths(grid, M)) {
        ScoreRow row;
        row.length = len;
        row.scores.resize(M - len + 1);
        const double inv = 1.0 / static_cast<double>(len);
        for (int s = 1; s <= M - len + 1; ++s) {
            double acc = 0.0;
            for (int k = 0; k < K; ++k)
                acc += (table.prefix(k, s + len - 1) - table.prefix(k, s - 1)) * w(k);
            row.scores[s - 1] = acc * inv + bias;
        }
        if (evals) *evals += row.scores.size();
        rows.push_back(std::move(row));
    }
    return rows;
}

// Picks the working-set span maximizing margin-rescaled loss + score.
Span loss_augmented_argmax(const std::vector<ScoreRow>& rows, const Span& truth) {
    BestSpan best;
    for (const auto& row : rows) {
        for (std::size_t s = 0; s < row.scores.size(); ++s) {
            const Span cand{static_cast<int>(s) + 1,
                            static_cast<int>(s) + row.length};
            best.consider(row.scores[s] + (1.0 - span_overlap(truth, cand)),
                          cand.start, row.length);
        }
    }
    return Span{best.start, best.start + best.len - 1};
}

// Working-set structured SVM: alternates loss-augmented inference with
// Pegasos-style subgradient epochs on the accumulated constraints; keeps the
// averaged iterate with the best validation metric.
Eigen::MatrixXd structured_sgd(
    int n, const std::vector<Span>& truths, const Eigen::MatrixXd& w0,
    const std::function<Eigen::MatrixXd(int, const Span&)>& feature,
    const std::function<std::vector<ScoreRow>(int, const Eigen::MatrixXd&)>& table,
    double C, int outer_rounds, int inner_epochs, std::uint64_t seed,
    const std::function<double(const Eigen::MatrixXd&)>& val_metric) {
    const double lambda = 1.0 / (C * n);
    Eigen::MatrixXd w = w0;
    Eigen::MatrixXd w_sum = w0;
    long steps = 0;

    std::vector<std::vector<Span>> working(n);
    std::vector<std::vector<Eigen::MatrixXd>> working_feat(n);
    std::vector<Eigen::MatrixXd> truth_feat(n);
    for (int i = 0; i < n; ++i) truth_feat[i] = feature(i, truths[i]);

    Rng rng(mix_seed(seed, 0x5095));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    double best_metric = -std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_w = w0;
    long t = 0;

    for (int round = 0; round < outer_rounds; ++round) {
        for (int i = 0; i < n; ++i) {
            const Span cand = loss_augmented_argmax(table(i, w), truths[i]);
            bool known = false;
            for (const auto& s : working[i])
                if (s.start == cand.start && s.end == cand.end) known = true;
            if (!known) {
                working[i].push_back(cand);
                working_feat[i].push_back(feature(i, cand));
            }
        }

        for (int epoch = 0; epoch < inner_epochs; ++epoch) {
            rng.shuffle(order);
            for (int i : order) {
                ++t;
                const double eta = 1.0 / (lambda * static_cast<double>(t));
                const double v_truth = w.cwiseProduct(truth_feat[i]).sum();
                double best_v = v_truth;
                int best_k = -1;
                for (std::size_t k = 0; k < working[i].size(); ++k) {
                    const double v = (1.0 - span_overlap(truths[i], working[i][k])) +
                                     w.cwiseProduct(working_feat[i][k]).sum();
                    if (v > best_v) {
                        best_v = v;
                        best_k = static_cast<int>(k);
                    }
                }
                w *= (1.0 - eta * lambda);
                if (best_k >= 0)
                    w += eta * (truth_feat[i] - working_feat[i][static_cast<std::size_t>(best_k)]);
                w_sum += w;
                ++steps;
            }
        }

        const Eigen::MatrixXd w_avg = w_sum / static_cast<double>(steps);
        const double metric = val_metric(w_avg);
        if (metric > best_metric) {
            best_metric = metric;
            best_w = w_avg;
        }
    }
    return best_w;
}

// AUC against decoys when both outcome classes are present, otherwise mean
// overlap with the ground truth.
double continuous_metric(const std::vector<DetectionResult>& dets,
                         const std::vector<std::optional<Span>>& truths) {
    std::vector<double> scores;
    std::vector<int> labels;
    double overlap_sum = 0.0;
    int overlap_n = 0;
    for (std::size_t i = 0; i < dets.size(); ++i) {
        scores.push_back(dets[i].score);
        if (truths[i]) {
            const double ov =
                span_overlap(Span{dets[i].start, dets[i].end}, *truths[i]);
            labels.push_back(ov >= 0.5 ? 1 : -1);
            overlap_sum += ov;
            ++overlap_n;
        } else {
            labels.push_back(-1);
        }
    }
    const bool pos = std::count(labels.begin(), labels.end(), 1) > 0;
    const bool neg = std::count(labels.begin(), labels.end(), -1) > 0;
    if (pos && neg) return roc_auc(scores, labels);
    return overlap_n > 0 ? overlap_sum / overlap_n : 0.0;
}

struct TrainSplit {
    std::vector<int> train_idx;
    std::vector<int> val_idx;
};

TrainSplit split_holdout(int n, double fraction, std::uint64_t seed) {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(mix_seed(seed, 0x5EED));
    rng.shuffle(idx);
    int n_val = static_cast<int>(std::lround(fraction * n));
    n_val = std::clamp(n_val, 0, n - 1);
    TrainSplit split;
    split.val_idx.assign(idx.begin(), idx.begin() + n_val);
    split.train_idx.assign(idx.begin() + n_val, idx.end());
    if (split.val_idx.empty()) split.val_idx = split.train_idx;  // validate on train
    std::sort(split.train_idx.begin(), split.train_idx.end());
    std::sort(split.val_idx.begin(), split.val_idx.end());
    return split;
}

void require_spans(const std::vector<Sequence>& train) {
    if (train.empty()) throw std::invalid_argument("train_continuous: empty training set");
    for (const auto& s : train) {
        s.validate();
        if (!s.event_span)
            throw std::invalid_argument("train_continuous: sequence '" + s.id +
                                        "' missing event span");
    }
}

}  // namespace

ContinuousModel train_continuous(const std::vector<Sequence>& train,
                                 const ContinuousTrainConfig& cfg) {
    require_spans(train);
    const int n = static_cast<int>(train.size());
    const TrainSplit split = split_holdout(n, cfg.holdout_fraction, cfg.seed);

    std::vector<Sequence> segments;
    std::vector<int> seg_lengths;
    for (int i : split.train_idx) {
        segments.push_back(event_segment(train[i]));
        seg_lengths.push_back(segments.back().frames());
    }

    int T = cfg.T;
    if (T <= 0) T = *std::max_element(seg_lengths.begin(), seg_lengths.end());

    MeanWarp pbar;
    if (cfg.pbar_mode == WarpMode::Learned && segments.size() >= 2) {
        pbar = mean_warp(learn_warp_set(segments, T, cfg.threads));
    } else if (cfg.pbar_mode == WarpMode::Learned) {
        std::cerr << "warning: fewer than 2 training event segments; "
                     "falling back to the identity warp\n";
        pbar = fixed_warp(T, WarpMode::Eye);
    } else {
        pbar = fixed_warp(T, cfg.pbar_mode);
    }

    const WindowGrid grid = candidate_window_lengths(seg_lengths, cfg.n_candidates);

    std::vector<Span> truths;
    for (int i : split.train_idx) truths.push_back(*train[i].event_span);

    auto feature = [&](int i, const Span& s) -> Eigen::MatrixXd {
        const Sequence& seq = train[split.train_idx[static_cast<std::size_t>(i)]];
        Sequence window;
        window.data = seq.data.middleCols(s.start - 1, s.end - s.start + 1);
        return represent(window, pbar).data;
    };
    auto table = [&](int i, const Eigen::MatrixXd& w) {
        const Sequence& seq = train[split.train_idx[static_cast<std::size_t>(i)]];
        const LinearModel probe{w, 0.0, cfg.C, ""};
        return warp_score_table(seq.data, probe, pbar, grid);
    };
    auto val_metric = [&](const Eigen::MatrixXd& w) {
        const LinearModel probe{w, 0.0, cfg.C, ""};
        std::vector<DetectionResult> dets;
        std::vector<std::optional<Span>> vt;
        for (int i : split.val_idx) {
            dets.push_back(detect_continuous(train[i], probe, pbar, grid));
            vt.push_back(train[i].event_span);
        }
        for (const auto& d : cfg.val_decoys) {
            dets.push_back(detect_continuous(d, probe, pbar, grid));
            vt.push_back(std::nullopt);
        }
        return continuous_metric(dets, vt);
    };

    const Eigen::MatrixXd w0 =
        Eigen::MatrixXd::Zero(train.front().dims(), T);
    const Eigen::MatrixXd w =
        structured_sgd(static_cast<int>(split.train_idx.size()), truths, w0, feature,
                       table, cfg.C, cfg.outer_rounds, cfg.inner_epochs, cfg.seed,
                       val_metric);

    ContinuousModel out;
    out.model = LinearModel{w, 0.0, cfg.C, warp_mode_name(pbar.mode)};
    out.pbar = pbar;
    out.grid = grid;
    return out;
}

BowContinuousModel bow_train_continuous(const std::vector<Sequence>& train, int K,
                                        const ContinuousTrainConfig& cfg) {
    require_spans(train);
    const int n = static_cast<int>(train.size());
    const TrainSplit split = split_holdout(n, cfg.holdout_fraction, cfg.seed);

    std::vector<Sequence> tr;
    std::vector<int> seg_lengths;
    std::vector<Span> truths;
    for (int i : split.train_idx) {
        tr.push_back(train[i]);
        const Span s = *train[i].event_span;
        seg_lengths.push_back(s.end - s.start + 1);
        truths.push_back(s);
    }

    const Codebook cb = kmeans_fit(collect_frames(tr), K, mix_seed(cfg.seed, 0xB0B));
    std::vector<CumulativeTable> tables;
    tables.reserve(tr.size());
    for (const auto& s : tr) tables.push_back(cumulative_table(encode_frames(s, cb)));

    const WindowGrid grid = candidate_window_lengths(seg_lengths, cfg.n_candidates);

    auto feature = [&](int i, const Span& s) -> Eigen::MatrixXd {
        return bow_window(tables[static_cast<std::size_t>(i)], s.start, s.end);
    };
    auto table = [&](int i, const Eigen::MatrixXd& w) {
        return bow_score_table(tables[static_cast<std::size_t>(i)], w.col(0), 0.0, grid,
                               nullptr);
    };
    auto detect_with = [&](const Sequence& x, const Eigen::VectorXd& w) {
        const CumulativeTable t = cumulative_table(encode_frames(x, cb));
        std::size_t evals = 0;
        auto rows = bow_score_table(t, w, 0.0, grid, &evals);
        return argmax_spans(std::move(rows), false, evals);
    };
    auto val_metric = [&](const Eigen::MatrixXd& w) {
        std::vector<DetectionResult> dets;
        std::vector<std::optional<Span>> vt;
        for (int i : split.val_idx) {
            dets.push_back(detect_with(train[i], w.col(0)));
            vt.push_back(train[i].event_span);
        }
        for (const auto& d : cfg.val_decoys) {
            dets.push_back(detect_with(d, w.col(0)));
            vt.push_back(std::nullopt);
        }
        return continuous_metric(dets, vt);
    };

    const Eigen::MatrixXd w0 = Eigen::MatrixXd::Zero(K, 1);
    const Eigen::MatrixXd w =
        structured_sgd(static_cast<int>(split.train_idx.size()), truths, w0, feature,
                       table, cfg.C, cfg.outer_rounds, cfg.inner_epochs, cfg.seed,
                       val_metric);

    BowContinuousModel out;
    out.codebook = cb;
    out.w = w.col(0);
    out.bias = 0.0;
    out.grid = grid;
    return out;
}

DetectionResult bow_detect_continuous(const Sequence& x, const BowContinuousModel& model,
                                      const DetectOptions& opts) {
    x.validate();
    const CumulativeTable table = cumulative_table(encode_frames(x, model.codebook));
    std::size_t evals = 0;
    auto rows = bow_score_table(table, model.w, model.bias, model.grid, &evals);
    return argmax_spans(std::move(rows), opts.keep_scores, evals);
}

}  // namespace warpdet
