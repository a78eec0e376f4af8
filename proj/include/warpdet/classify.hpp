#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "warpdet/sequence.hpp"
#include "warpdet/warp_rep.hpp"

namespace warpdet {

// Linear detector over D x T representations: f = <W, Phi> + bias.
struct LinearModel {
    Eigen::MatrixXd W;  // D x T
    double bias = 0.0;
    double trainC = 0.0;
    std::string meanwarp_ref;
};

// Per-window-length precomputation; scoring a raw length-M window against
// m costs exactly M*D multiply-adds.
struct SpecializedModel {
    int M = 0;
    Eigen::MatrixXd m;  // D x M
    double bias = 0.0;
};

struct LinearSvmOptions {
    int epochs = 120;
    int restarts = 3;
    // When set, receives the hinge objective of the averaged iterate after
    // each epoch of the winning restart.
    std::vector<double>* objective_trace = nullptr;
};

// (1/2)||W||^2 + C * sum_i hinge(y_i * f(Phi_i)); the value the trainer
// minimizes.
double linear_svm_objective(const std::vector<Representation>& feats,
                            const std::vector<int>& labels, double C,
                            const LinearModel& model);

// Seeded averaged stochastic subgradient descent with step 1/(lambda*iter),
// best of `restarts` runs by final objective. Labels are +-1 and both
// classes must be present.
LinearModel train_linear_svm(const std::vector<Representation>& feats,
                             const std::vector<int>& labels, double C,
                             std::uint64_t seed, const LinearSvmOptions& opts = {});

double score(const LinearModel& model, const Representation& rep);

// m_M = W * (interp_matrix(M, T) * pbar)^T, so that scoring a raw window
// equals scoring its warped representation.
SpecializedModel specialize_model(const LinearModel& model, const MeanWarp& pbar, int M);

// <vec(X[:, start..start+M-1]), vec(m)> + bias, start 1-based. When
// madd_count is given the window is scored with an instrumented loop that
// counts every multiply-add.
double score_window(const Eigen::MatrixXd& x, int start, const SpecializedModel& sm,
                    std::size_t* madd_count = nullptr);

// ---- DTW-kernel SVM baseline ----

struct KernelModel {
    std::vector<Sequence> support;
    std::vector<int> support_indices;  // positions in the training list
    Eigen::VectorXd beta;              // label-signed dual weights alpha_l * y_l
    double bias = 0.0;
    double bandwidth = 0.0;  // t in exp(-t * dtw)
};

// exp(-t * dtw_hat(x, y)) with the symmetrized DTW cost.
double dtw_kernel(const Sequence& x, const Sequence& y, double t);

// Pairwise kernel values, no projection applied.
Eigen::MatrixXd dtw_kernel_gram_raw(const std::vector<Sequence>& seqs, double t,
                                    int threads = 1);

// Frobenius-nearest PSD matrix: symmetrize, eigen-decompose, clip negative
// eigenvalues to zero, reconstruct.
Eigen::MatrixXd psd_project(const Eigen::MatrixXd& gram);

// Raw gram followed by PSD projection.
Eigen::MatrixXd dtw_kernel_gram(const std::vector<Sequence>& seqs, double t,
                                int threads = 1);

// Seeded coordinate ascent on the box-constrained dual. The gram must be
// PSD (project first); min eigenvalue below -1e-8 is rejected.
KernelModel train_kernel_svm(const Eigen::MatrixXd& gram,
                             const std::vector<Sequence>& seqs,
                             const std::vector<int>& labels, double C, double t,
                             std::uint64_t seed);

// One DTW per support sequence: sum_l beta_l k(x, X_l) + bias.
double kernel_score(const KernelModel& model, const Sequence& x);

}  // namespace warpdet
