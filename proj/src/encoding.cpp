#include "warpdet/encoding.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "warpdet/rng.hpp"

namespace warpdet {

Eigen::MatrixXd collect_frames(const std::vector<Sequence>& seqs) {
    if (seqs.empty()) return {};
    const int D = seqs.front().dims();
    Eigen::Index total = 0;
    for (const auto& s : seqs) {
        if (s.dims() != D)
            throw std::invalid_argument("collect_frames: mixed dimensionality");
        total += s.frames();
    }
    Eigen::MatrixXd out(D, total);
    Eigen::Index at = 0;
    for (const auto& s : seqs) {
        out.middleCols(at, s.frames()) = s.data;
        at += s.frames();
    }
    return out;
}

namespace {

int count_distinct_columns(const Eigen::MatrixXd& frames) {
    std::vector<int> order(frames.cols());
    std::iota(order.begin(), order.end(), 0);
    auto col_less = [&](int a, int b) {
        for (Eigen::Index d = 0; d < frames.rows(); ++d) {
            if (frames(d, a) != frames(d, b)) return frames(d, a) < frames(d, b);
        }
        return false;
    };
    std::sort(order.begin(), order.end(), col_less);
    int distinct = frames.cols() > 0 ? 1 : 0;
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (frames.col(order[i]) != frames.col(order[i - 1])) ++distinct;
    }
    return distinct;
}

// Nearest center by squared distance; ties resolved toward the lowest index.
int nearest_center(const Eigen::MatrixXd& centers, const Eigen::VectorXd& x) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < centers.rows(); ++k) {
        const double d = (centers.row(k).transpose() - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

}  // namespace

Codebook kmeans_fit(const Eigen::MatrixXd& frames, int K, std::uint64_t seed) {
    const int n = static_cast<int>(frames.cols());
    const int D = static_cast<int>(frames.rows());
    if (K < 1) throw std::invalid_argument("kmeans_fit: K must be positive");
    if (n < K || count_distinct_columns(frames) < K)
        throw std::invalid_argument("kmeans_fit: fewer distinct frames than K");

    Rng rng(seed);
    Eigen::MatrixXd centers(K, D);

    // k-means++ seeding
    centers.row(0) = frames.col(rng.uniform_int(0, n - 1)).transpose();
    Eigen::VectorXd dist2(n);
    for (int i = 0; i < n; ++i)
        dist2(i) = (frames.col(i) - centers.row(0).transpose()).squaredNorm();
    for (int k = 1; k < K; ++k) {
        const double total = dist2.sum();
        int pick = -1;
        if (total > 0.0) {
            double r = rng.uniform() * total;
            for (int i = 0; i < n; ++i) {
                r -= dist2(i);
                if (r <= 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0) pick = n - 1;
        } else {
            // remaining mass is zero; fall back to the first unused distinct frame
            for (int i = 0; i < n && pick < 0; ++i)
                if (dist2(i) > 0.0) pick = i;
            if (pick < 0) pick = rng.uniform_int(0, n - 1);
        }
        centers.row(k) = frames.col(pick).transpose();
        for (int i = 0; i < n; ++i) {
            const double d = (frames.col(i) - centers.row(k).transpose()).squaredNorm();
            dist2(i) = std::min(dist2(i), d);
        }
    }

    std::vector<int> assign(n, -1);
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const int k = nearest_center(centers, frames.col(i));
            if (k != assign[i]) {
                assign[i] = k;
                changed = true;
            }
        }
        if (!changed) break;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(K, D);
        std::vector<int> counts(K, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(assign[i]) += frames.col(i).transpose();
            ++counts[assign[i]];
        }
        for (int k = 0; k < K; ++k) {
            if (counts[k] > 0) {
                centers.row(k) = sums.row(k) / counts[k];
            } else {
                // reseed to the farthest point from the empty cluster's center
                int far = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d = (frames.col(i) - centers.row(k).transpose()).squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centers.row(k) = frames.col(far).transpose();
            }
        }
    }

    return Codebook{K, D, std::move(centers), seed};
}

Sequence encode_frames(const Sequence& x, const Codebook& cb) {
    x.validate();
    if (x.dims() != cb.D)
        throw std::invalid_argument("encode_frames: sequence/codebook dimensionality mismatch");
    Sequence out;
    out.id = x.id;
    out.label = x.label;
    out.event_span = x.event_span;
    out.data = Eigen::MatrixXd::Zero(cb.K, x.frames());
    for (int m = 0; m < x.frames(); ++m)
        out.data(nearest_center(cb.centers, x.data.col(m)), m) = 1.0;
    return out;
}

Eigen::VectorXd bow(const Sequence& encoded) {
    encoded.validate();
    return encoded.data.rowwise().mean();
}

CumulativeTable cumulative_table(const Sequence& encoded) {
    encoded.validate();
    const int K = encoded.dims();
    const int M = encoded.frames();
    CumulativeTable table;
    table.prefix.resize(K, M + 1);
    table.prefix.col(0).setZero();
    for (int m = 1; m <= M; ++m)
        table.prefix.col(m) = table.prefix.col(m - 1) + encoded.data.col(m - 1);
    return table;
}

Eigen::VectorXd bow_window(const CumulativeTable& table, int a, int b,
                           std::size_t* op_count) {
    const int M = table.frames();
    if (a < 1 || b < a || b > M)
        throw std::invalid_argument("bow_window: window out of range");
    const int K = table.K();
    const double inv = 1.0 / static_cast<double>(b - a + 1);
    Eigen::VectorXd out(K);
    for (int k = 0; k < K; ++k) {
        out(k) = (table.prefix(k, b) - table.prefix(k, a - 1)) * inv;
        if (op_count) ++*op_count;
    }
    return out;
}

}  // namespace warpdet
