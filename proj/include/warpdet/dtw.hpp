#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "warpdet/sequence.hpp"

namespace warpdet {

// A DTW alignment as 1-based index vectors of common length T.
// px(1) = py(1) = 1, px(T) = M, py(T) = N; steps are (1,0), (0,1) or (1,1).
struct WarpPath {
    std::vector<int> px;
    std::vector<int> py;
    double cost = 0.0;

    int length() const { return static_cast<int>(px.size()); }
};

// Binary M x T selection matrix; column t has a single 1 in row px(t).
struct WarpMatrix {
    Eigen::MatrixXd data;

    int rows() const { return static_cast<int>(data.rows()); }
    int cols() const { return static_cast<int>(data.cols()); }
};

// Throws if the path violates endpoint, step or length constraints.
void validate_warp_path(const WarpPath& path, int M, int N);

// Minimum-cost alignment under squared Euclidean frame distance and the
// three causal moves. O(MND) time, O(MN) memory. Backtrace ties prefer the
// diagonal move, then (1,0), then (0,1), so paths are deterministic.
WarpPath dtw_align(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
WarpPath dtw_align(const Sequence& x, const Sequence& y);

// (P_x, P_y) with P_x(px(t), t) = 1 and P_y(py(t), t) = 1.
std::pair<WarpMatrix, WarpMatrix> warp_matrices(const WarpPath& path, int M, int N);

// Exhaustive enumeration of every causal path; test oracle. Requires
// M * N <= 64.
double dtw_bruteforce(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
double dtw_bruteforce(const Sequence& x, const Sequence& y);

}  // namespace warpdet
