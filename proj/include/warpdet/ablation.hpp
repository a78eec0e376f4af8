#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "warpdet/classify.hpp"
#include "warpdet/data_io.hpp"
#include "warpdet/metrics.hpp"
#include "warpdet/warp_rep.hpp"

namespace warpdet {

struct AblationConfig {
    int folds = 5;
    std::uint64_t seed = 0;
    int K = 16;        // codebook size, raw-signal encodings
    int K_delta = 8;   // codebook size, delta encodings
    std::vector<double> c_grid = {10.0};
    int T_override = 0;  // 0 = longest training sequence per fold
    LinearSvmOptions svm;
    int threads = 1;
};

struct CellResult {
    EncodingKind encoding = EncodingKind::Linear;
    WarpMode pbar = WarpMode::Learned;
    double auc = 0.0;
    double max_f1 = 0.0;
    double accuracy = 0.0;
};

// One (encoding, pbar-mode) configuration under k-fold cross-validation.
// Per fold, trains a one-vs-rest linear SVM per class on the warp-averaged
// representations and averages AUC / max-F1 / accuracy-at-zero over classes
// and folds. `per_fold` optionally receives the fold-level means and
// `per_class` the class-level means (aligned with ds.class_names).
CellResult evaluate_cell(const Dataset& ds, EncodingKind encoding, WarpMode mode,
                         const AblationConfig& cfg,
                         std::vector<Metrics>* per_fold = nullptr,
                         std::vector<Metrics>* per_class = nullptr);

// The full {Linear, Delta, NonLinear, NonLinear-Delta} x {Learned, Eye,
// Hist} grid; 12 rows, deterministic under the config seed.
std::vector<CellResult> run_ablation(const Dataset& ds, const AblationConfig& cfg);

// Picks C from the grid by a stratified inner split on validation AUC.
// Single-entry grids are returned as-is.
double select_linear_c(const std::vector<Representation>& feats,
                       const std::vector<int>& labels,
                       const std::vector<double>& c_grid, const LinearSvmOptions& svm,
                       std::uint64_t seed);

void write_ablation_csv(std::ostream& os, const std::vector<CellResult>& cells,
                        const std::vector<std::string>& config_lines);

// DTW-kernel SVM baseline under the same fold plan and one-vs-rest protocol.
struct KernelBaselineConfig {
    int folds = 5;
    std::uint64_t seed = 0;
    std::vector<double> c_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
    std::vector<double> t_grid = {1e-4, 1e-3, 1e-2, 1e-1};
    int threads = 1;
};

CellResult evaluate_kernel_baseline(const Dataset& ds, const KernelBaselineConfig& cfg,
                                    std::vector<Metrics>* per_fold = nullptr,
                                    std::vector<Metrics>* per_class = nullptr);

}  // namespace warpdet
