#include "warpdet/ablation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "warpdet/dtw.hpp"
#include "warpdet/encoding.hpp"
#include "warpdet/parallel.hpp"
#include "warpdet/rng.hpp"

namespace warpdet {

namespace {

struct FoldData {
    std::vector<Sequence> train;
    std::vector<Sequence> test;
};

FoldData split_fold(const Dataset& ds, const FoldPlan& plan, int fold) {
    FoldData out;
    if (plan.k == 1) {  // resubstitution: train and test on everything
        out.train = ds.sequences;
        out.test = ds.sequences;
        return out;
    }
    const std::set<std::string> held(plan.test_ids[fold].begin(), plan.test_ids[fold].end());
    for (const auto& seq : ds.sequences)
        (held.count(seq.id) ? out.test : out.train).push_back(seq);
    return out;
}

// Applies the cell's frame encoding. Codebooks are trained on all training
// frames and shared by train and test.
void encode_cell(EncodingKind enc, std::vector<Sequence>& train,
                 std::vector<Sequence>& test, int K, int K_delta, std::uint64_t seed) {
    auto delta_all = [](std::vector<Sequence>& seqs) {
        for (auto& s : seqs) s = delta_encode(s);
    };
    auto codebook_all = [&](std::vector<Sequence>& tr, std::vector<Sequence>& te, int k) {
        const Codebook cb = kmeans_fit(collect_frames(tr), k, seed);
        for (auto& s : tr) s = encode_frames(s, cb);
        for (auto& s : te) s = encode_frames(s, cb);
    };
    switch (enc) {
        case EncodingKind::Linear:
            break;
        case EncodingKind::Delta:
            delta_all(train);
            delta_all(test);
            break;
        case EncodingKind::NonLinear:
            codebook_all(train, test, K);
            break;
        case EncodingKind::NonLinearDelta:
            delta_all(train);
            delta_all(test);
            codebook_all(train, test, K_delta);
            break;
    }
}

int max_frames(const std::vector<Sequence>& seqs) {
    int m = 0;
    for (const auto& s : seqs) m = std::max(m, s.frames());
    return m;
}

MeanWarp cell_pbar(WarpMode mode, const std::vector<Sequence>& positives, int T,
                   int threads) {
    if (mode == WarpMode::Learned) {
        if (positives.size() >= 2) return mean_warp(learn_warp_set(positives, T, threads));
        std::cerr << "warning: fewer than 2 positive examples; "
                     "falling back to the identity warp\n";
        return fixed_warp(T, WarpMode::Eye);
    }
    return fixed_warp(T, mode);
}

Metrics mean_metrics(const std::vector<Metrics>& ms) {
    Metrics out;
    for (const auto& m : ms) {
        out.auc += m.auc;
        out.max_f1 += m.max_f1;
        out.accuracy += m.accuracy;
    }
    const double n = static_cast<double>(ms.size());
    out.auc /= n;
    out.max_f1 /= n;
    out.accuracy /= n;
    return out;
}

}  // namespace

double select_linear_c(const std::vector<Representation>& feats,
                       const std::vector<int>& labels,
                       const std::vector<double>& c_grid, const LinearSvmOptions& svm,
                       std::uint64_t seed) {
    if (c_grid.empty()) throw std::invalid_argument("empty C grid");
    if (c_grid.size() == 1) return c_grid.front();

    // stratified 75/25 inner split
    std::vector<int> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] > 0 ? pos : neg).push_back(static_cast<int>(i));
    if (pos.size() < 2 || neg.size() < 2) return c_grid.front();
    Rng rng(mix_seed(seed, 0xC5EL));
    rng.shuffle(pos);
    rng.shuffle(neg);
    const auto take = [](std::vector<int>& v, std::size_t n_val, std::vector<int>& val,
                         std::vector<int>& tr) {
        for (std::size_t i = 0; i < v.size(); ++i)
            (i < n_val ? val : tr).push_back(v[i]);
    };
    std::vector<int> val_idx, tr_idx;
    take(pos, std::max<std::size_t>(1, pos.size() / 4), val_idx, tr_idx);
    take(neg, std::max<std::size_t>(1, neg.size() / 4), val_idx, tr_idx);

    std::vector<Representation> tr_feats, val_feats;
    std::vector<int> tr_labels, val_labels;
    for (int i : tr_idx) {
        tr_feats.push_back(feats[static_cast<std::size_t>(i)]);
        tr_labels.push_back(labels[static_cast<std::size_t>(i)]);
    }
    for (int i : val_idx) {
        val_feats.push_back(feats[static_cast<std::size_t>(i)]);
        val_labels.push_back(labels[static_cast<std::size_t>(i)]);
    }

    double best_auc = -1.0, best_c = c_grid.front();
    for (double c : c_grid) {
        const LinearModel m = train_linear_svm(tr_feats, tr_labels, c,
                                               mix_seed(seed, 0x11), svm);
        std::vector<double> scores;
        for (const auto& f : val_feats) scores.push_back(score(m, f));
        const double auc = roc_auc(scores, val_labels);
        if (auc > best_auc) {
            best_auc = auc;
            best_c = c;
        }
    }
    return best_c;
}

CellResult evaluate_cell(const Dataset& ds, EncodingKind encoding, WarpMode mode,
                         const AblationConfig& cfg, std::vector<Metrics>* per_fold,
                         std::vector<Metrics>* per_class) {
    if (ds.class_names.empty())
        throw std::invalid_argument("evaluate_cell: dataset has no class names");
    std::vector<std::string> ids;
    for (const auto& s : ds.sequences) ids.push_back(s.id);
    const FoldPlan plan = make_folds(ids, cfg.folds, cfg.seed);

    const std::uint64_t cell_tag =
        (static_cast<std::uint64_t>(encoding) << 8) | static_cast<std::uint64_t>(mode);

    std::vector<Metrics> fold_metrics;
    std::vector<std::vector<Metrics>> class_by_fold(ds.class_names.size());
    for (int f = 0; f < cfg.folds; ++f) {
        FoldData fold = split_fold(ds, plan, f);
        const std::uint64_t fold_seed = mix_seed(cfg.seed, cell_tag * 64 + f);
        encode_cell(encoding, fold.train, fold.test, cfg.K, cfg.K_delta, fold_seed);

        const int T = cfg.T_override > 0 ? cfg.T_override : max_frames(fold.train);

        std::vector<Metrics> class_metrics;
        for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
            const std::string& cls = ds.class_names[c];
            std::vector<Sequence> positives;
            for (const auto& s : fold.train)
                if (s.label == cls) positives.push_back(s);
            const MeanWarp pbar = cell_pbar(mode, positives, T, cfg.threads);

            std::vector<Representation> train_feats, test_feats;
            std::vector<int> train_labels, test_labels;
            for (const auto& s : fold.train) {
                Representation r = represent(s, pbar);
                r.encoding = encoding;
                train_feats.push_back(std::move(r));
                train_labels.push_back(s.label == cls ? 1 : -1);
            }
            for (const auto& s : fold.test) {
                Representation r = represent(s, pbar);
                r.encoding = encoding;
                test_feats.push_back(std::move(r));
                test_labels.push_back(s.label == cls ? 1 : -1);
            }

            const std::uint64_t class_seed = mix_seed(fold_seed, c);
            const double C =
                select_linear_c(train_feats, train_labels, cfg.c_grid, cfg.svm, class_seed);
            const LinearModel model =
                train_linear_svm(train_feats, train_labels, C, class_seed, cfg.svm);

            std::vector<double> scores;
            for (const auto& fe : test_feats) scores.push_back(score(model, fe));
            Metrics m;
            m.auc = roc_auc(scores, test_labels);
            m.max_f1 = max_f1(scores, test_labels);
            m.accuracy = accuracy_at_zero(scores, test_labels);
            class_metrics.push_back(m);
            class_by_fold[c].push_back(m);
        }
        fold_metrics.push_back(mean_metrics(class_metrics));
    }
    if (per_fold) *per_fold = fold_metrics;
    if (per_class) {
        per_class->clear();
        for (const auto& ms : class_by_fold) per_class->push_back(mean_metrics(ms));
    }

    const Metrics m = mean_metrics(fold_metrics);
    return CellResult{encoding, mode, m.auc, m.max_f1, m.accuracy};
}

std::vector<CellResult> run_ablation(const Dataset& ds, const AblationConfig& cfg) {
    std::vector<CellResult> cells;
    for (EncodingKind enc : {EncodingKind::Linear, EncodingKind::Delta,
                             EncodingKind::NonLinear, EncodingKind::NonLinearDelta}) {
        for (WarpMode mode : {WarpMode::Learned, WarpMode::Eye, WarpMode::Hist}) {
            cells.push_back(evaluate_cell(ds, enc, mode, cfg));
        }
    }
    return cells;
}

void write_ablation_csv(std::ostream& os, const std::vector<CellResult>& cells,
                        const std::vector<std::string>& config_lines) {
    for (const auto& line : config_lines) os << "# " << line << '\n';
    os << "encoding,pbar,auc,max_f1,accuracy\n";
    char buf[128];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g,%.12g\n",
                      encoding_name(c.encoding), warp_mode_name(c.pbar), c.auc, c.max_f1,
                      c.accuracy);
        os << buf;
    }
}

namespace {

// Pairwise DTW costs; rows index `a`, columns index `b`.
Eigen::MatrixXd dtw_cost_matrix(const std::vector<Sequence>& a,
                                const std::vector<Sequence>& b, int threads) {
    Eigen::MatrixXd costs(a.size(), b.size());
    std::vector<std::pair<int, int>> tasks;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            tasks.emplace_back(static_cast<int>(i), static_cast<int>(j));
    parallel_for(tasks.size(), threads, [&](std::size_t k) {
        const auto& [i, j] = tasks[k];
        costs(i, j) = dtw_align(a[i].data, b[j].data).cost;
    });
    return costs;
}

// Symmetrized cost matrix over one sequence list.
Eigen::MatrixXd dtw_cost_matrix_sym(const std::vector<Sequence>& seqs, int threads) {
    const Eigen::MatrixXd c = dtw_cost_matrix(seqs, seqs, threads);
    return 0.5 * (c + c.transpose());
}

std::vector<double> kernel_scores_from_costs(const KernelModel& model,
                                             const Eigen::MatrixXd& cost_rows) {
    std::vector<double> scores(cost_rows.rows(), model.bias);
    for (Eigen::Index i = 0; i < cost_rows.rows(); ++i) {
        for (std::size_t l = 0; l < model.support_indices.size(); ++l)
            scores[static_cast<std::size_t>(i)] +=
                model.beta(static_cast<Eigen::Index>(l)) *
                std::exp(-model.bandwidth * cost_rows(i, model.support_indices[l]));
    }
    return scores;
}

}  // namespace

CellResult evaluate_kernel_baseline(const Dataset& ds, const KernelBaselineConfig& cfg,
                                    std::vector<Metrics>* per_fold,
                                    std::vector<Metrics>* per_class) {
    if (cfg.c_grid.empty() || cfg.t_grid.empty())
        throw std::invalid_argument("evaluate_kernel_baseline: empty parameter grid");
    std::vector<std::string> ids;
    for (const auto& s : ds.sequences) ids.push_back(s.id);
    const FoldPlan plan = make_folds(ids, cfg.folds, cfg.seed);

    std::vector<Metrics> fold_metrics;
    std::vector<std::vector<Metrics>> class_by_fold(ds.class_names.size());
    for (int f = 0; f < cfg.folds; ++f) {
        FoldData fold = split_fold(ds, plan, f);
        const Eigen::MatrixXd train_costs = dtw_cost_matrix_sym(fold.train, cfg.threads);
        const Eigen::MatrixXd test_costs =
            dtw_cost_matrix(fold.test, fold.train, cfg.threads);
        const std::uint64_t fold_seed = mix_seed(cfg.seed, 0xF00 + f);

        std::vector<Metrics> class_metrics;
        for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
            const std::string& cls = ds.class_names[c];
            std::vector<int> train_labels, test_labels;
            for (const auto& s : fold.train) train_labels.push_back(s.label == cls ? 1 : -1);
            for (const auto& s : fold.test) test_labels.push_back(s.label == cls ? 1 : -1);

            double best_c = cfg.c_grid.front();
            double best_t = cfg.t_grid.front();
            if (cfg.c_grid.size() > 1 || cfg.t_grid.size() > 1) {
                // stratified inner split on the training fold
                std::vector<int> pos, neg;
                for (std::size_t i = 0; i < train_labels.size(); ++i)
                    (train_labels[i] > 0 ? pos : neg).push_back(static_cast<int>(i));
                Rng rng(mix_seed(fold_seed, c));
                rng.shuffle(pos);
                rng.shuffle(neg);
                std::vector<int> val_idx, tr_idx;
                for (std::size_t i = 0; i < pos.size(); ++i)
                    (i < std::max<std::size_t>(1, pos.size() / 4) ? val_idx : tr_idx)
                        .push_back(pos[i]);
                for (std::size_t i = 0; i < neg.size(); ++i)
                    (i < std::max<std::size_t>(1, neg.size() / 4) ? val_idx : tr_idx)
                        .push_back(neg[i]);
                std::sort(val_idx.begin(), val_idx.end());
                std::sort(tr_idx.begin(), tr_idx.end());

                std::vector<Sequence> inner_train;
                std::vector<int> inner_labels;
                for (int i : tr_idx) {
                    inner_train.push_back(fold.train[static_cast<std::size_t>(i)]);
                    inner_labels.push_back(train_labels[static_cast<std::size_t>(i)]);
                }
                Eigen::MatrixXd inner_costs(tr_idx.size(), tr_idx.size());
                for (std::size_t i = 0; i < tr_idx.size(); ++i)
                    for (std::size_t j = 0; j < tr_idx.size(); ++j)
                        inner_costs(i, j) = train_costs(tr_idx[i], tr_idx[j]);
                Eigen::MatrixXd val_costs(val_idx.size(), tr_idx.size());
                for (std::size_t i = 0; i < val_idx.size(); ++i)
                    for (std::size_t j = 0; j < tr_idx.size(); ++j)
                        val_costs(i, j) = train_costs(val_idx[i], tr_idx[j]);
                std::vector<int> val_labels;
                for (int i : val_idx) val_labels.push_back(train_labels[static_cast<std::size_t>(i)]);

                double best_auc = -1.0;
                for (double t : cfg.t_grid) {
                    const Eigen::MatrixXd gram =
                        psd_project((-t * inner_costs).array().exp().matrix());
                    for (double cc : cfg.c_grid) {
                        const KernelModel m = train_kernel_svm(
                            gram, inner_train, inner_labels, cc, t, mix_seed(fold_seed, 0x22));
                        const auto scores = kernel_scores_from_costs(m, val_costs);
                        const double auc = roc_auc(scores, val_labels);
                        if (auc > best_auc) {
                            best_auc = auc;
                            best_c = cc;
                            best_t = t;
                        }
                    }
                }
            }

            const Eigen::MatrixXd gram =
                psd_project((-best_t * train_costs).array().exp().matrix());
            const KernelModel model = train_kernel_svm(gram, fold.train, train_labels,
                                                       best_c, best_t,
                                                       mix_seed(fold_seed, 0x33 + c));
            const auto scores = kernel_scores_from_costs(model, test_costs);
            Metrics m;
            m.auc = roc_auc(scores, test_labels);
            m.max_f1 = max_f1(scores, test_labels);
            m.accuracy = accuracy_at_zero(scores, test_labels);
            class_metrics.push_back(m);
            class_by_fold[c].push_back(m);
        }
        fold_metrics.push_back(mean_metrics(class_metrics));
    }
    if (per_fold) *per_fold = fold_metrics;
    if (per_class) {
        per_class->clear();
        for (const auto& ms : class_by_fold) per_class->push_back(mean_metrics(ms));
    }
    const Metrics m = mean_metrics(fold_metrics);
    return CellResult{EncodingKind::Linear, WarpMode::Learned, m.auc, m.max_f1, m.accuracy};
}

}  // namespace warpdet
