#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "warpdet/sequence.hpp"

namespace warpdet {

// k-means codebook; row k of `centers` is codeword k. K is configuration;
// reference sizes from the literature for full-scale corpora: motion
// gestures 300 (delta 100), facial expressions 136 (delta 30), smile videos
// 1500 (delta 500).
struct Codebook {
    int K = 0;
    int D = 0;
    Eigen::MatrixXd centers;  // K x D
    std::uint64_t train_seed = 0;
};

// Prefix sums of one-hot encodings; column 0 is all zeros, so a window
// (a, b) pools in O(K).
struct CumulativeTable {
    Eigen::MatrixXd prefix;  // K x (M+1)

    int K() const { return static_cast<int>(prefix.rows()); }
    int frames() const { return static_cast<int>(prefix.cols()) - 1; }
};

// All frames of the given sequences, concatenated column-wise (D x total).
Eigen::MatrixXd collect_frames(const std::vector<Sequence>& seqs);

// Lloyd's algorithm from a seeded k-means++ initialization; runs to an
// assignment fixpoint or 100 iterations. Empty clusters are reseeded to the
// farthest point from their previous center. Requires >= K distinct frames.
Codebook kmeans_fit(const Eigen::MatrixXd& frames, int K, std::uint64_t seed);

// Nearest-codeword one-hot encoding (squared Euclidean); ties go to the
// lowest codeword index. Output is a K x M one-hot sequence.
Sequence encode_frames(const Sequence& x, const Codebook& cb);

// Mean over columns; Eq-style pooled histogram for one-hot input.
Eigen::VectorXd bow(const Sequence& encoded);

CumulativeTable cumulative_table(const Sequence& encoded);

// Pooled encoding of the 1-based inclusive window [a, b]. Optionally counts
// the O(K) work performed.
Eigen::VectorXd bow_window(const CumulativeTable& table, int a, int b,
                           std::size_t* op_count = nullptr);

}  // namespace warpdet
