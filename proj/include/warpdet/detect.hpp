#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "warpdet/classify.hpp"
#include "warpdet/encoding.hpp"
#include "warpdet/sequence.hpp"
#include "warpdet/warp_rep.hpp"

namespace warpdet {

// Candidate window lengths searched during continuous detection.
struct WindowGrid {
    std::vector<int> lengths;  // ascending, deduplicated
    int stride = 1;
};

// Evenly spaced quantiles (min and max included) of the training event
// lengths, deduplicated. A single candidate falls back to the median.
WindowGrid candidate_window_lengths(const std::vector<int>& event_lengths,
                                    int n_candidates);

// Scores of every start position for one window length; scores[s-1] is the
// window starting at 1-based frame s.
struct ScoreRow {
    int length = 0;
    std::vector<double> scores;
};

struct DetectOptions {
    bool keep_scores = false;
    bool use_fft = false;  // frequency-domain scoring; must match direct to 1e-6
};

struct DetectionResult {
    int start = 0;
    int end = 0;
    double score = 0.0;
    int window_length_used = 0;
    std::vector<ScoreRow> per_window_scores;  // retained when requested
    std::size_t score_evals = 0;              // windows scored
};

// Sliding-window scores for all grid lengths that fit in x.
std::vector<ScoreRow> warp_score_table(const Eigen::MatrixXd& x,
                                       const LinearModel& model, const MeanWarp& pbar,
                                       const WindowGrid& grid, bool use_fft = false,
                                       std::size_t* evals = nullptr);

// Specializes the model per candidate length, slides it over every start
// position, and returns the argmax span. Ties break toward the smaller
// start, then the smaller length.
DetectionResult detect_continuous(const Sequence& x, const LinearModel& model,
                                  const MeanWarp& pbar, const WindowGrid& grid,
                                  const DetectOptions& opts = {});

// "length,start,score" rows for external plotting.
void write_score_table_csv(std::ostream& os, const std::vector<ScoreRow>& rows);

struct ContinuousTrainConfig {
    int T = 0;                     // 0 = longest training event segment
    WarpMode pbar_mode = WarpMode::Learned;
    int n_candidates = 10;
    double C = 10.0;
    int outer_rounds = 12;   // constraint-generation rounds
    int inner_epochs = 4;    // subgradient epochs per round
    std::uint64_t seed = 7;
    double holdout_fraction = 0.25;
    std::vector<Sequence> val_decoys;  // optional event-free validation sequences
    int threads = 1;
};

struct ContinuousModel {
    LinearModel model;
    MeanWarp pbar;
    WindowGrid grid;
};

// Margin-rescaled structured hinge with loss 1 - span_overlap, trained by
// constraint generation plus subgradient steps on the accumulated working
// sets. Every training sequence must carry an event span. Returns the
// iterate with the best validation metric (continuous AUC when computable,
// otherwise mean overlap).
ContinuousModel train_continuous(const std::vector<Sequence>& train,
                                 const ContinuousTrainConfig& cfg);

// ---- BOW + structured baseline ----

struct BowContinuousModel {
    Codebook codebook;
    Eigen::VectorXd w;  // K weights over pooled window encodings
    double bias = 0.0;
    WindowGrid grid;
};

BowContinuousModel bow_train_continuous(const std::vector<Sequence>& train, int K,
                                        const ContinuousTrainConfig& cfg);

// Encodes the raw sequence, builds the summed-area table, then scores every
// window in O(K).
DetectionResult bow_detect_continuous(const Sequence& x, const BowContinuousModel& model,
                                      const DetectOptions& opts = {});

}  // namespace warpdet
