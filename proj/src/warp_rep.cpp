#include "warpdet/warp_rep.hpp"

#include <algorithm>
#include <stdexcept>

#include "warpdet/dtw.hpp"
#include "warpdet/parallel.hpp"

namespace warpdet {

const char* warp_mode_name(WarpMode m) {
    switch (m) {
        case WarpMode::Learned: return "learned";
        case WarpMode::Eye: return "eye";
        case WarpMode::Hist: return "hist";
    }
    return "?";
}

WarpMode warp_mode_from_name(const std::string& name) {
    if (name == "learned") return WarpMode::Learned;
    if (name == "eye") return WarpMode::Eye;
    if (name == "hist") return WarpMode::Hist;
    throw std::invalid_argument("unknown warp mode '" + name + "'");
}

Eigen::MatrixXd resample_warp_matrix(const Eigen::MatrixXd& warp, int T) {
    const int M = static_cast<int>(warp.rows());
    const int Tp = static_cast<int>(warp.cols());
    if (T < M)
        throw std::invalid_argument("resample_warp_matrix: T must cover the source rows");
    Eigen::MatrixXd g = interp_matrix(M, T).transpose() * warp * interp_matrix(Tp, T);
    for (int t = 0; t < T; ++t) {
        const double s = g.col(t).sum();
        if (s <= 0.0)
            throw std::runtime_error("resample_warp_matrix: column lost all mass");
        g.col(t) /= s;
    }
    return g;
}

WarpSet learn_warp_set(const std::vector<Sequence>& positives, int T, int threads) {
    const int n = static_cast<int>(positives.size());
    if (n < 2) throw std::invalid_argument("learn_warp_set: need at least 2 positives");
    int max_len = 0;
    for (const auto& s : positives) {
        s.validate();
        max_len = std::max(max_len, s.frames());
    }
    if (T < max_len)
        throw std::invalid_argument("learn_warp_set: T smaller than longest positive");

    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) pairs.emplace_back(i, j);

    WarpSet set;
    set.T = T;
    set.members.resize(pairs.size());
    set.source.resize(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        const auto& [a, b] = pairs[k];
        const WarpPath path = dtw_align(positives[a].data, positives[b].data);
        const auto [px, py] =
            warp_matrices(path, positives[a].frames(), positives[b].frames());
        (void)py;
        set.members[k] = resample_warp_matrix(px.data, T);
        set.source[k] = {positives[a].id, positives[b].id};
    });
    return set;
}

MeanWarp mean_warp(const WarpSet& set) {
    if (set.members.empty()) throw std::invalid_argument("mean_warp: empty warp set");
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(set.T, set.T);
    for (const auto& m : set.members) acc += m;
    acc /= static_cast<double>(set.members.size());
    for (int t = 0; t < set.T; ++t) {
        const double s = acc.col(t).sum();
        if (s > 0.0) acc.col(t) /= s;
    }
    return MeanWarp{set.T, std::move(acc), WarpMode::Learned};
}

MeanWarp fixed_warp(int T, WarpMode mode) {
    if (T < 1) throw std::invalid_argument("fixed_warp: T must be positive");
    switch (mode) {
        case WarpMode::Eye:
            return MeanWarp{T, Eigen::MatrixXd::Identity(T, T), WarpMode::Eye};
        case WarpMode::Hist:
            return MeanWarp{T, Eigen::MatrixXd::Constant(T, T, 1.0 / T), WarpMode::Hist};
        case WarpMode::Learned:
            break;
    }
    throw std::invalid_argument("fixed_warp: mode must be Eye or Hist");
}

Representation represent(const Sequence& x, const MeanWarp& pbar) {
    x.validate();
    if (pbar.T < 1 || pbar.data.rows() != pbar.T || pbar.data.cols() != pbar.T)
        throw std::invalid_argument("represent: malformed mean warp");
    Representation rep;
    rep.data = x.data * interp_matrix(x.frames(), pbar.T) * pbar.data;
    return rep;
}

}  // namespace warpdet
