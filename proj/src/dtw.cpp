#include "warpdet/dtw.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace warpdet {

namespace {

// Move codes by predecessor: 0 = (i-1,j-1), 1 = (i-1,j), 2 = (i,j-1).
enum : uint8_t { kDiag = 0, kAdvX = 1, kAdvY = 2 };

}  // namespace

void validate_warp_path(const WarpPath& path, int M, int N) {
    const int T = path.length();
    if (T < 1 || static_cast<int>(path.py.size()) != T)
        throw std::invalid_argument("warp path: empty or mismatched index vectors");
    if (T > M + N - 1) throw std::invalid_argument("warp path: length exceeds M + N - 1");
    if (path.px.front() != 1 || path.py.front() != 1 || path.px.back() != M ||
        path.py.back() != N)
        throw std::invalid_argument("warp path: endpoint constraint violated");
    for (int t = 0; t + 1 < T; ++t) {
        const int dx = path.px[t + 1] - path.px[t];
        const int dy = path.py[t + 1] - path.py[t];
        const bool ok = (dx == 1 && dy == 0) || (dx == 0 && dy == 1) || (dx == 1 && dy == 1);
        if (!ok) throw std::invalid_argument("warp path: illegal step");
    }
}

WarpPath dtw_align(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows())
        throw std::invalid_argument("dtw_align: sequence dimensionality mismatch");
    const int M = static_cast<int>(x.cols());
    const int N = static_cast<int>(y.cols());
    if (M < 1 || N < 1) throw std::invalid_argument("dtw_align: empty sequence");

    Eigen::MatrixXd cum(M, N);
    Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic> move(M, N);

    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < M; ++i) {
            const double d = (x.col(i) - y.col(j)).squaredNorm();
            if (i == 0 && j == 0) {
                cum(i, j) = d;
                move(i, j) = kDiag;  // unused at the origin
                continue;
            }
            double best = std::numeric_limits<double>::infinity();
            uint8_t best_move = kDiag;
            if (i > 0 && j > 0) {
                best = cum(i - 1, j - 1);
                best_move = kDiag;
            }
            if (i > 0 && cum(i - 1, j) < best) {
                best = cum(i - 1, j);
                best_move = kAdvX;
            }
            if (j > 0 && cum(i, j - 1) < best) {
                best = cum(i, j - 1);
                best_move = kAdvY;
            }
            cum(i, j) = best + d;
            move(i, j) = best_move;
        }
    }

    WarpPath path;
    path.cost = cum(M - 1, N - 1);
    int i = M - 1, j = N - 1;
    std::vector<int> rx, ry;
    for (;;) {
        rx.push_back(i + 1);
        ry.push_back(j + 1);
        if (i == 0 && j == 0) break;
        switch (move(i, j)) {
            case kDiag: --i; --j; break;
            case kAdvX: --i; break;
            case kAdvY: --j; break;
        }
    }
    path.px.assign(rx.rbegin(), rx.rend());
    path.py.assign(ry.rbegin(), ry.rend());
    return path;
}

WarpPath dtw_align(const Sequence& x, const Sequence& y) {
    x.validate();
    y.validate();
    return dtw_align(x.data, y.data);
}

std::pair<WarpMatrix, WarpMatrix> warp_matrices(const WarpPath& path, int M, int N) {
    validate_warp_path(path, M, N);
    const int T = path.length();
    WarpMatrix px, py;
    px.data = Eigen::MatrixXd::Zero(M, T);
    py.data = Eigen::MatrixXd::Zero(N, T);
    for (int t = 0; t < T; ++t) {
        px.data(path.px[t] - 1, t) = 1.0;
        py.data(path.py[t] - 1, t) = 1.0;
    }
    return {std::move(px), std::move(py)};
}

namespace {

void enumerate_paths(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, int i, int j,
                     double cost, double& best) {
    cost += (x.col(i) - y.col(j)).squaredNorm();
    const int M = static_cast<int>(x.cols());
    const int N = static_cast<int>(y.cols());
    if (i == M - 1 && j == N - 1) {
        best = std::min(best, cost);
        return;
    }
    if (i + 1 < M && j + 1 < N) enumerate_paths(x, y, i + 1, j + 1, cost, best);
    if (i + 1 < M) enumerate_paths(x, y, i + 1, j, cost, best);
    if (j + 1 < N) enumerate_paths(x, y, i, j + 1, cost, best);
}

}  // namespace

double dtw_bruteforce(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows())
        throw std::invalid_argument("dtw_bruteforce: sequence dimensionality mismatch");
    if (x.cols() * y.cols() > 64)
        throw std::invalid_argument("dtw_bruteforce: M*N exceeds 64");
    double best = std::numeric_limits<double>::infinity();
    enumerate_paths(x, y, 0, 0, 0.0, best);
    return best;
}

double dtw_bruteforce(const Sequence& x, const Sequence& y) {
    return dtw_bruteforce(x.data, y.data);
}

}  // namespace warpdet
