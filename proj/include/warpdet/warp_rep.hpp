#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "warpdet/sequence.hpp"

namespace warpdet {

enum class WarpMode { Learned, Eye, Hist };

const char* warp_mode_name(WarpMode m);
WarpMode warp_mode_from_name(const std::string& name);

// Pairwise alignment warps learned from positive examples, all resampled to
// a common T x T shape with unit column sums.
struct WarpSet {
    int T = 0;
    std::vector<Eigen::MatrixXd> members;
    std::vector<std::pair<std::string, std::string>> source;  // ordered id pairs
};

// Column-stochastic T x T averaging operator. Learned = mean of a WarpSet;
// Eye = identity (plain stretch); Hist = all entries 1/T (order-destroying).
struct MeanWarp {
    int T = 0;
    Eigen::MatrixXd data;
    WarpMode mode = WarpMode::Eye;
};

// Fixed-length D x T view of a sequence.
struct Representation {
    Eigen::MatrixXd data;  // D x T
    EncodingKind encoding = EncodingKind::Linear;

    int T() const { return static_cast<int>(data.cols()); }
};

// Resamples an M x Tp warping matrix to T x T by separable linear
// resampling of rows and columns, then renormalizes columns to sum 1.
// Requires T >= M so no source row loses all of its mass.
Eigen::MatrixXd resample_warp_matrix(const Eigen::MatrixXd& warp, int T);

// Aligns every ordered pair of positives with DTW and collects the first
// sequence's warping matrix of each pair, resampled to T x T. Produces
// n(n-1) members for n positives. T must cover the longest positive.
WarpSet learn_warp_set(const std::vector<Sequence>& positives, int T, int threads = 1);

// Entrywise mean of the set followed by column renormalization.
MeanWarp mean_warp(const WarpSet& set);

// mode must be Eye or Hist.
MeanWarp fixed_warp(int T, WarpMode mode);

// Phi = X * interp_matrix(M, T) * pbar.
Representation represent(const Sequence& x, const MeanWarp& pbar);

}  // namespace warpdet
