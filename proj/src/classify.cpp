#include "warpdet/classify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "warpdet/dtw.hpp"
#include "warpdet/parallel.hpp"
#include "warpdet/rng.hpp"

namespace warpdet {

namespace {

void check_binary_labels(const std::vector<int>& labels, std::size_t n) {
    if (labels.size() != n) throw std::invalid_argument("labels/features size mismatch");
    bool pos = false, neg = false;
    for (int y : labels) {
        if (y > 0) pos = true;
        else neg = true;
    }
    if (!pos || !neg) throw std::invalid_argument("training data has a single class");
}

}  // namespace

double linear_svm_objective(const std::vector<Representation>& feats,
                            const std::vector<int>& labels, double C,
                            const LinearModel& model) {
    double hinge = 0.0;
    for (std::size_t i = 0; i < feats.size(); ++i) {
        const double margin =
            (labels[i] > 0 ? 1.0 : -1.0) *
            (model.W.cwiseProduct(feats[i].data).sum() + model.bias);
        hinge += std::max(0.0, 1.0 - margin);
    }
    return 0.5 * model.W.squaredNorm() + C * hinge;
}

LinearModel train_linear_svm(const std::vector<Representation>& feats,
                             const std::vector<int>& labels, double C,
                             std::uint64_t seed, const LinearSvmOptions& opts) {
    if (feats.empty()) throw std::invalid_argument("train_linear_svm: no training data");
    check_binary_labels(labels, feats.size());
    if (C <= 0.0) throw std::invalid_argument("train_linear_svm: C must be positive");

    const int n = static_cast<int>(feats.size());
    const Eigen::Index D = feats.front().data.rows();
    const Eigen::Index T = feats.front().data.cols();
    for (const auto& f : feats)
        if (f.data.rows() != D || f.data.cols() != T)
            throw std::invalid_argument("train_linear_svm: inconsistent feature shapes");

    const double lambda = 1.0 / (C * n);

    LinearModel best;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<double> best_trace;

    for (int r = 0; r < std::max(1, opts.restarts); ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(D, T);
        double b = 0.0;
        Eigen::MatrixXd w_avg = Eigen::MatrixXd::Zero(D, T);
        double b_avg = 0.0;
        long steps_avg = 0;

        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);

        std::vector<double> trace;
        long t = 0;
        for (int epoch = 0; epoch < opts.epochs; ++epoch) {
            rng.shuffle(order);
            for (int i : order) {
                ++t;
                const double eta = 1.0 / (lambda * static_cast<double>(t));
                const double y = labels[i] > 0 ? 1.0 : -1.0;
                const double margin = y * (w.cwiseProduct(feats[i].data).sum() + b);
                w *= (1.0 - eta * lambda);
                if (margin < 1.0) {
                    w += eta * y * feats[i].data;
                    b += eta * y;
                }
                w_avg += w;
                b_avg += b;
                ++steps_avg;
            }
            LinearModel avg{w_avg / steps_avg, b_avg / steps_avg, C, ""};
            trace.push_back(linear_svm_objective(feats, labels, C, avg));
        }

        LinearModel candidate{w_avg / steps_avg, b_avg / steps_avg, C, ""};
        const double obj = linear_svm_objective(feats, labels, C, candidate);
        if (obj < best_obj) {
            best_obj = obj;
            best = std::move(candidate);
            best_trace = std::move(trace);
        }
    }
    if (opts.objective_trace) *opts.objective_trace = best_trace;
    return best;
}

double score(const LinearModel& model, const Representation& rep) {
    if (rep.data.rows() != model.W.rows() || rep.data.cols() != model.W.cols())
        throw std::invalid_argument("score: representation/model shape mismatch");
    return model.W.cwiseProduct(rep.data).sum() + model.bias;
}

SpecializedModel specialize_model(const LinearModel& model, const MeanWarp& pbar, int M) {
    if (M < 1) throw std::invalid_argument("specialize_model: M must be positive");
    if (pbar.T != model.W.cols())
        throw std::invalid_argument("specialize_model: mean warp / model length mismatch");
    const Eigen::MatrixXd a = interp_matrix(M, pbar.T) * pbar.data;  // M x T
    return SpecializedModel{M, model.W * a.transpose(), model.bias};
}

double score_window(const Eigen::MatrixXd& x, int start, const SpecializedModel& sm,
                    std::size_t* madd_count) {
    const int M = sm.M;
    if (start < 1 || start + M - 1 > x.cols())
        throw std::invalid_argument("score_window: window out of range");
    if (x.rows() != sm.m.rows())
        throw std::invalid_argument("score_window: dimensionality mismatch");
    if (madd_count) {
        double acc = 0.0;
        for (int m = 0; m < M; ++m) {
            for (Eigen::Index d = 0; d < x.rows(); ++d) {
                acc += x(d, start - 1 + m) * sm.m(d, m);
                ++*madd_count;
            }
        }
        return acc + sm.bias;
    }
    return x.middleCols(start - 1, M).cwiseProduct(sm.m).sum() + sm.bias;
}

// ---- DTW-kernel baseline ----

double dtw_kernel(const Sequence& x, const Sequence& y, double t) {
    const double ab = dtw_align(x.data, y.data).cost;
    const double ba = dtw_align(y.data, x.data).cost;
    return std::exp(-t * 0.5 * (ab + ba));
}

Eigen::MatrixXd dtw_kernel_gram_raw(const std::vector<Sequence>& seqs, double t,
                                    int threads) {
    if (t <= 0.0) throw std::invalid_argument("dtw_kernel_gram: t must be positive");
    const int L = static_cast<int>(seqs.size());
    Eigen::MatrixXd gram(L, L);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < L; ++i)
        for (int j = i; j < L; ++j) pairs.emplace_back(i, j);
    parallel_for(pairs.size(), threads, [&](std::size_t k) {
        const auto& [i, j] = pairs[k];
        const double v = dtw_kernel(seqs[i], seqs[j], t);
        gram(i, j) = v;
        gram(j, i) = v;
    });
    return gram;
}

Eigen::MatrixXd psd_project(const Eigen::MatrixXd& gram) {
    if (gram.rows() != gram.cols())
        throw std::invalid_argument("psd_project: matrix must be square");
    const Eigen::MatrixXd sym = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    const Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd out =
        eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
    return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd dtw_kernel_gram(const std::vector<Sequence>& seqs, double t,
                                int threads) {
    return psd_project(dtw_kernel_gram_raw(seqs, t, threads));
}

KernelModel train_kernel_svm(const Eigen::MatrixXd& gram,
                             const std::vector<Sequence>& seqs,
                             const std::vector<int>& labels, double C, double t,
                             std::uint64_t seed) {
    const int L = static_cast<int>(seqs.size());
    if (gram.rows() != L || gram.cols() != L)
        throw std::invalid_argument("train_kernel_svm: gram/sequence size mismatch");
    check_binary_labels(labels, seqs.size());
    if (C <= 0.0) throw std::invalid_argument("train_kernel_svm: C must be positive");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (gram + gram.transpose()));
    if (eig.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("train_kernel_svm: gram is not PSD; project first");

    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(L);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(L);  // f_i = sum_j alpha_j y_j K_ij
    Eigen::VectorXd y(L);
    for (int i = 0; i < L; ++i) y(i) = labels[i] > 0 ? 1.0 : -1.0;

    Rng rng(seed);
    std::vector<int> order(L);
    std::iota(order.begin(), order.end(), 0);
    const int max_sweeps = 200;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        rng.shuffle(order);
        double max_delta = 0.0;
        for (int i : order) {
            const double kii = gram(i, i);
            if (kii < 1e-12) continue;
            const double grad = 1.0 - y(i) * f(i);
            const double cand = std::clamp(alpha(i) + grad / kii, 0.0, C);
            const double delta = cand - alpha(i);
            if (delta != 0.0) {
                alpha(i) = cand;
                f += delta * y(i) * gram.col(i);
                max_delta = std::max(max_delta, std::abs(delta));
            }
        }
        if (max_delta < 1e-10) break;
    }

    KernelModel model;
    model.bandwidth = t;
    model.bias = 0.0;
    std::vector<double> betas;
    for (int i = 0; i < L; ++i) {
        if (alpha(i) > 1e-12) {
            model.support.push_back(seqs[i]);
            model.support_indices.push_back(i);
            betas.push_back(alpha(i) * y(i));
        }
    }
    model.beta = Eigen::Map<Eigen::VectorXd>(betas.data(), static_cast<Eigen::Index>(betas.size()));
    return model;
}

double kernel_score(const KernelModel& model, const Sequence& x) {
    double acc = model.bias;
    for (std::size_t l = 0; l < model.support.size(); ++l)
        acc += model.beta(static_cast<Eigen::Index>(l)) *
               dtw_kernel(x, model.support[l], model.bandwidth);
    return acc;
}

}  // namespace warpdet
