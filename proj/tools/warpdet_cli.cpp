// warpdet command-line tool: synthetic data generation, training, detection
// and evaluation over sequence-manifest datasets.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "warpdet/ablation.hpp"
#include "warpdet/data_io.hpp"
#include "warpdet/detect.hpp"
#include "warpdet/metrics.hpp"
#include "warpdet/parallel.hpp"
#include "warpdet/rng.hpp"
#include "warpdet/synth.hpp"
#include "warpdet/version.hpp"

namespace fs = std::filesystem;
using namespace warpdet;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Bad invocations (unknown flags, bad enum values, missing input files) exit
// with kExitUsage; failures inside a well-formed run exit with kExitRuntime.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string require_input(const std::string& path, const std::string& flag) {
    if (path.empty() || !fs::exists(path))
        throw UsageError(flag + ": no such file or directory: '" + path + "'");
    return path;
}

struct PhaseTimer {
    using clock = std::chrono::steady_clock;
    clock::time_point last = clock::now();
    std::vector<std::pair<std::string, double>> phases;

    void mark(const std::string& name) {
        const auto now = clock::now();
        phases.emplace_back(name, std::chrono::duration<double>(now - last).count());
        last = now;
    }
    void write(const fs::path& path) const {
        std::ofstream os(path);
        os << "# wall-clock seconds per phase (not covered by determinism checks)\n";
        char buf[64];
        for (const auto& [name, secs] : phases) {
            std::snprintf(buf, sizeof buf, "%.6f", secs);
            os << name << ' ' << buf << '\n';
        }
    }
};

std::vector<double> parse_grid(const std::string& csv, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::runtime_error(flag + ": bad value '" + tok + "'");
        }
    }
    if (out.empty()) throw std::runtime_error(flag + ": empty grid");
    return out;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Config echo shared by every results file; keeps runs auditable and the
// CSVs byte-reproducible for a fixed config+seed.
void write_config(const fs::path& out_dir, const std::vector<std::string>& lines) {
    std::ofstream os(out_dir / "config.txt");
    os << kVersion << '\n';
    for (const auto& l : lines) os << l << '\n';
}

std::vector<std::string> base_config(const std::string& command) {
    return {"command=" + command};
}

void echo_lines(std::ofstream& os, const std::vector<std::string>& lines) {
    os << "# " << kVersion << '\n';
    for (const auto& l : lines) os << "# " << l << '\n';
}

fs::path prepare_out(const std::string& out) {
    if (out.empty()) throw std::runtime_error("--out is required");
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

// ---- synth ----

struct SynthArgs {
    std::string mode = "isolated";
    SynthConfig cfg;
    std::string out;
};

int cmd_synth(const SynthArgs& args) {
    PhaseTimer timer;
    const fs::path out = prepare_out(args.out);
    const Dataset ds =
        args.mode == "isolated" ? synth_isolated(args.cfg) : synth_continuous(args.cfg);
    timer.mark("generate");
    save_dataset(ds, out);
    timer.mark("write");

    std::vector<std::string> lines = base_config("synth");
    lines.push_back("mode=" + args.mode);
    lines.push_back("seed=" + std::to_string(args.cfg.seed));
    lines.push_back("dims=" + std::to_string(args.cfg.dims));
    lines.push_back("classes=" + std::to_string(args.cfg.n_classes));
    lines.push_back("per_class=" + std::to_string(args.cfg.per_class));
    lines.push_back("len_min=" + std::to_string(args.cfg.len_min));
    lines.push_back("len_max=" + std::to_string(args.cfg.len_max));
    lines.push_back("warp=" + fmt(args.cfg.warp));
    lines.push_back("noise=" + fmt(args.cfg.noise));
    if (args.mode == "continuous") {
        lines.push_back("distractors=" + std::to_string(args.cfg.distractors));
        lines.push_back("decoys=" + std::to_string(args.cfg.decoys));
    }
    write_config(out, lines);
    timer.write(out / "timings.txt");
    std::cout << "wrote " << ds.sequences.size() << " sequences to " << out << '\n';
    return 0;
}

// ---- eval (isolated task) ----

struct EvalArgs {
    std::string manifest;
    std::string method = "linear";
    std::string encoding = "linear";
    std::string pbar = "learned";
    int folds = 5;
    int K = 16;
    int K_delta = 8;
    std::string c_grid = "0.01,0.1,1,10,100";
    std::string t_grid = "1e-4,1e-3,1e-2,1e-1";
    int T = 0;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
};

int cmd_eval(const EvalArgs& args) {
    PhaseTimer timer;
    const fs::path out = prepare_out(args.out);
    const Dataset ds = load_manifest(require_input(args.manifest, "--manifest"));
    timer.mark("load");

    std::vector<std::string> lines = base_config("eval");
    lines.push_back("manifest=" + args.manifest);
    lines.push_back("method=" + args.method);
    lines.push_back("folds=" + std::to_string(args.folds));
    lines.push_back("seed=" + std::to_string(args.seed));

    std::vector<Metrics> per_fold;
    std::vector<Metrics> per_class;
    CellResult mean;
    if (args.method == "linear") {
        AblationConfig cfg;
        cfg.folds = args.folds;
        cfg.seed = args.seed;
        cfg.K = args.K;
        cfg.K_delta = args.K_delta;
        cfg.c_grid = parse_grid(args.c_grid, "--C-grid");
        cfg.T_override = args.T;
        cfg.threads = args.threads;
        mean = evaluate_cell(ds, encoding_from_name(args.encoding),
                             warp_mode_from_name(args.pbar), cfg, &per_fold, &per_class);
        lines.push_back("encoding=" + args.encoding);
        lines.push_back("pbar=" + args.pbar);
        lines.push_back("K=" + std::to_string(args.K));
        lines.push_back("K_delta=" + std::to_string(args.K_delta));
        lines.push_back("C_grid=" + args.c_grid);
        lines.push_back("T=" + std::to_string(args.T));
    } else if (args.method == "dtw-kernel") {
        KernelBaselineConfig cfg;
        cfg.folds = args.folds;
        cfg.seed = args.seed;
        cfg.c_grid = parse_grid(args.c_grid, "--C-grid");
        cfg.t_grid = parse_grid(args.t_grid, "--t-grid");
        cfg.threads = args.threads;
        mean = evaluate_kernel_baseline(ds, cfg, &per_fold, &per_class);
        lines.push_back("C_grid=" + args.c_grid);
        lines.push_back("t_grid=" + args.t_grid);
    } else {
        throw std::runtime_error("--method must be linear or dtw-kernel");
    }
    timer.mark("evaluate");

    std::ofstream os(out / "results.csv");
    echo_lines(os, lines);
    os << "scope,auc,max_f1,accuracy\n";
    for (std::size_t f = 0; f < per_fold.size(); ++f)
        os << "fold" << f << ',' << fmt(per_fold[f].auc) << ',' << fmt(per_fold[f].max_f1)
           << ',' << fmt(per_fold[f].accuracy) << '\n';
    for (std::size_t c = 0; c < per_class.size(); ++c)
        os << "class_" << ds.class_names[c] << ',' << fmt(per_class[c].auc) << ','
           << fmt(per_class[c].max_f1) << ',' << fmt(per_class[c].accuracy) << '\n';
    os << "mean," << fmt(mean.auc) << ',' << fmt(mean.max_f1) << ','
       << fmt(mean.accuracy) << '\n';
    os.close();

    std::ofstream txt(out / "summary.txt");
    txt << kVersion << "\n\n";
    txt << args.method << " evaluation over " << args.folds << " folds\n";
    txt << "  auc       " << fmt(mean.auc) << '\n';
    txt << "  max F1    " << fmt(mean.max_f1) << '\n';
    txt << "  accuracy  " << fmt(mean.accuracy) << '\n';
    txt.close();

    write_config(out, lines);
    timer.write(out / "timings.txt");
    std::cout << "auc=" << fmt(mean.auc) << " max_f1=" << fmt(mean.max_f1)
              << " accuracy=" << fmt(mean.accuracy) << '\n';
    return 0;
}

// ---- ablate ----

struct AblateArgs {
    std::string manifest;
    int folds = 5;
    int K = 16;
    int K_delta = 8;
    std::string c_grid = "10";
    int T = 0;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
};

int cmd_ablate(const AblateArgs& args) {
    PhaseTimer timer;
    const fs::path out = prepare_out(args.out);
    const Dataset ds = load_manifest(require_input(args.manifest, "--manifest"));
    timer.mark("load");

    AblationConfig cfg;
    cfg.folds = args.folds;
    cfg.seed = args.seed;
    cfg.K = args.K;
    cfg.K_delta = args.K_delta;
    cfg.c_grid = parse_grid(args.c_grid, "--C-grid");
    cfg.T_override = args.T;
    cfg.threads = args.threads;
    const std::vector<CellResult> cells = run_ablation(ds, cfg);
    timer.mark("ablate");

    std::vector<std::string> lines = base_config("ablate");
    lines.push_back("manifest=" + args.manifest);
    lines.push_back("folds=" + std::to_string(args.folds));
    lines.push_back("K=" + std::to_string(args.K));
    lines.push_back("K_delta=" + std::to_string(args.K_delta));
    lines.push_back("C_grid=" + args.c_grid);
    lines.push_back("T=" + std::to_string(args.T));
    lines.push_back("seed=" + std::to_string(args.seed));

    std::ofstream os(out / "ablation.csv");
    std::vector<std::string> echo = {kVersion};
    echo.insert(echo.end(), lines.begin(), lines.end());
    write_ablation_csv(os, cells, echo);
    os.close();

    std::ofstream txt(out / "summary.txt");
    txt << kVersion << "\n\n";
    char row[160];
    std::snprintf(row, sizeof row, "%-16s %-8s %8s %8s %8s\n", "encoding", "pbar", "auc",
                  "max_f1", "acc");
    txt << row;
    for (const auto& cell : cells) {
        std::snprintf(row, sizeof row, "%-16s %-8s %8.4f %8.4f %8.4f\n",
                      encoding_name(cell.encoding), warp_mode_name(cell.pbar), cell.auc,
                      cell.max_f1, cell.accuracy);
        txt << row;
    }
    txt.close();

    write_config(out, lines);
    timer.write(out / "timings.txt");
    std::cout << "wrote " << cells.size() << " ablation cells to " << out << '\n';
    return 0;
}

// ---- train-isolated ----

struct TrainIsolatedArgs {
    std::string manifest;
    std::string encoding = "linear";
    std::string pbar = "learned";
    int T = 0;
    int K = 16;
    std::string c_grid = "10";
    std::uint64_t seed = 0;
    int threads = 1;
    std::string target;  // empty = every class
    std::string out;
};

int cmd_train_isolated(const TrainIsolatedArgs& args) {
    PhaseTimer timer;
    const fs::path out = prepare_out(args.out);
    Dataset ds = load_manifest(require_input(args.manifest, "--manifest"));
    timer.mark("load");

    const EncodingKind enc = encoding_from_name(args.encoding);
    const WarpMode mode = warp_mode_from_name(args.pbar);
    const std::vector<double> c_grid = parse_grid(args.c_grid, "--C-grid");

    // frame encoding (codebook trained on every training frame)
    std::vector<Sequence> seqs = ds.sequences;
    if (enc == EncodingKind::Delta || enc == EncodingKind::NonLinearDelta)
        for (auto& s : seqs) s = delta_encode(s);
    if (enc == EncodingKind::NonLinear || enc == EncodingKind::NonLinearDelta) {
        const Codebook cb = kmeans_fit(collect_frames(seqs), args.K, mix_seed(args.seed, 0xCB));
        for (auto& s : seqs) s = encode_frames(s, cb);
        save_codebook(cb, out / "codebook.bin");
    }
    int T = args.T;
    if (T <= 0)
        for (const auto& s : seqs) T = std::max(T, s.frames());
    timer.mark("encode");

    std::vector<std::string> classes = ds.class_names;
    if (!args.target.empty()) classes = {args.target};

    std::vector<std::string> lines = base_config("train-isolated");
    lines.push_back("manifest=" + args.manifest);
    lines.push_back("encoding=" + args.encoding);
    lines.push_back("pbar=" + args.pbar);
    lines.push_back("T=" + std::to_string(T));
    lines.push_back("K=" + std::to_string(args.K));
    lines.push_back("C_grid=" + args.c_grid);
    lines.push_back("seed=" + std::to_string(args.seed));

    for (std::size_t c = 0; c < classes.size(); ++c) {
        const std::string& cls = classes[c];
        std::vector<Sequence> positives;
        for (const auto& s : seqs)
            if (s.label == cls) positives.push_back(s);
        if (positives.empty())
            throw std::runtime_error("no sequences labeled '" + cls + "'");

        MeanWarp pbar;
        if (mode == WarpMode::Learned && positives.size() >= 2) {
            pbar = mean_warp(learn_warp_set(positives, T, args.threads));
        } else if (mode == WarpMode::Learned) {
            std::cerr << "warning: class '" << cls
                      << "' has a single positive; falling back to the identity warp\n";
            pbar = fixed_warp(T, WarpMode::Eye);
        } else {
            pbar = fixed_warp(T, mode);
        }

        std::vector<Representation> feats;
        std::vector<int> labels;
        for (const auto& s : seqs) {
            feats.push_back(represent(s, pbar));
            labels.push_back(s.label == cls ? 1 : -1);
        }
        const std::uint64_t class_seed = mix_seed(args.seed, c);
        const double C = select_linear_c(feats, labels, c_grid, {}, class_seed);
        LinearModel model = train_linear_svm(feats, labels, C, class_seed);
        model.meanwarp_ref = "pbar_" + cls + ".bin";
        save_linear_model(model, out / ("model_" + cls + ".bin"));
        save_mean_warp(pbar, out / ("pbar_" + cls + ".bin"));
        lines.push_back("class_" + cls + "_C=" + fmt(C));
    }
    timer.mark("train");

    write_config(out, lines);
    timer.write(out / "timings.txt");
    std::cout << "trained " << classes.size() << " one-vs-rest model(s) in " << out << '\n';
    return 0;
}

// ---- train-continuous ----

struct TrainContinuousArgs {
    std::string manifest;
    std::string method = "warp";
    std::string pbar = "learned";
    int T = 0;
    int K = 300;
    double C = 10.0;
    int window_candidates = 10;
    int rounds = 12;
    int epochs = 4;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out;
};

int cmd_train_continuous(const TrainContinuousArgs& args) {
    PhaseTimer timer;
    const fs::path out = prepare_out(args.out);
    const Dataset ds = load_manifest(require_input(args.manifest, "--manifest"));
    timer.mark("load");

    std::vector<Sequence> targets;
    std::vector<Sequence> decoys;
    for (const auto& s : ds.sequences)
        (s.event_span ? targets : decoys).push_back(s);
    if (targets.empty())
        throw std::runtime_error("manifest has no sequences with event spans");

    ContinuousTrainConfig cfg;
    cfg.T = args.T;
    cfg.pbar_mode = warp_mode_from_name(args.pbar);
    cfg.n_candidates = args.window_candidates;
    cfg.C = args.C;
    cfg.outer_rounds = args.rounds;
    cfg.inner_epochs = args.epochs;
    cfg.seed = args.seed;
    cfg.val_decoys = decoys;
    cfg.threads = args.threads;

    std::vector<std::string> lines = base_config("train-continuous");
    lines.push_back("manifest=" + args.manifest);
    lines.push_back("method=" + args.method);
    lines.push_back("C=" + fmt(args.C));
    lines.push_back("window_candidates=" + std::to_string(args.window_candidates));
    lines.push_back("rounds=" + std::to_string(args.rounds));
    lines.push_back("epochs=" + std::to_string(args.epochs));
    lines.push_back("seed=" + std::to_string(args.seed));

    if (args.method == "warp") {
        lines.push_back("pbar=" + args.pbar);
        const ContinuousModel cm = train_continuous(targets, cfg);
        save_linear_model(cm.model, out / "model.bin");
        save_mean_warp(cm.pbar, out / "pbar.bin");
        save_grid(cm.grid, out / "grid.txt");
    } else if (args.method == "bow") {
        lines.push_back("K=" + std::to_string(args.K));
        const BowContinuousModel bm = bow_train_continuous(targets, args.K, cfg);
        save_codebook(bm.codebook, out / "codebook.bin");
        save_bow_weights(bm.w, bm.bias, out / "bow.bin");
        save_grid(bm.grid, out / "grid.txt");
    } else {
        throw std::runtime_error("--method must be warp or bow");
    }
    timer.mark("train");

    write_config(out, lines);
    timer.write(out / "timings.txt");
    std::cout << "trained " << args.method << " detector in " << out << '\n';
    return 0;
}

// ---- detect ----

struct DetectArgs {
    std::string manifest;
    std::string model_dir;
    std::string method = "warp";
    bool fft = false;
    int threads = 1;
    std::string out;
};

int cmd_detect(const DetectArgs& args) {
    PhaseTimer timer;
    const fs::path out = prepare_out(args.out);
    const Dataset ds = load_manifest(require_input(args.manifest, "--manifest"));
    const fs::path mdir(require_input(args.model_dir, "--model-dir"));
    timer.mark("load");

    DetectOptions opts;
    opts.use_fft = args.fft;

    std::vector<DetectionResult> dets(ds.sequences.size());
    std::vector<std::optional<Span>> truths;
    for (const auto& s : ds.sequences) truths.push_back(s.event_span);
    if (args.method == "warp") {
        const LinearModel model = load_linear_model(mdir / "model.bin");
        const MeanWarp pbar = load_mean_warp(mdir / "pbar.bin");
        const WindowGrid grid = load_grid(mdir / "grid.txt");
        parallel_for(ds.sequences.size(), args.threads, [&](std::size_t i) {
            dets[i] = detect_continuous(ds.sequences[i], model, pbar, grid, opts);
        });
    } else if (args.method == "bow") {
        BowContinuousModel bm;
        bm.codebook = load_codebook(mdir / "codebook.bin");
        std::tie(bm.w, bm.bias) = load_bow_weights(mdir / "bow.bin");
        bm.grid = load_grid(mdir / "grid.txt");
        parallel_for(ds.sequences.size(), args.threads, [&](std::size_t i) {
            dets[i] = bow_detect_continuous(ds.sequences[i], bm, opts);
        });
    } else {
        throw std::runtime_error("--method must be warp or bow");
    }
    timer.mark("detect");

    std::vector<std::string> lines = base_config("detect");
    lines.push_back("manifest=" + args.manifest);
    lines.push_back("model_dir=" + args.model_dir);
    lines.push_back("method=" + args.method);
    lines.push_back("fft=" + std::string(args.fft ? "1" : "0"));

    std::ofstream os(out / "detections.csv");
    echo_lines(os, lines);
    os << "id,start,end,length,score,overlap\n";
    for (std::size_t i = 0; i < dets.size(); ++i) {
        const auto& d = dets[i];
        os << ds.sequences[i].id << ',' << d.start << ',' << d.end << ','
           << d.window_length_used << ',' << fmt(d.score) << ',';
        if (truths[i])
            os << fmt(span_overlap(Span{d.start, d.end}, *truths[i]));
        else
            os << "-";
        os << '\n';
    }
    os.close();

    bool any_truth = false, any_decoy = false;
    for (const auto& t : truths) (t ? any_truth : any_decoy) = true;
    if (any_truth) {
        double overlap_sum = 0.0;
        long n_truth = 0;
        for (std::size_t i = 0; i < dets.size(); ++i) {
            if (!truths[i]) continue;
            overlap_sum += span_overlap(Span{dets[i].start, dets[i].end}, *truths[i]);
            ++n_truth;
        }
        std::ofstream ms(out / "metrics.csv");
        echo_lines(ms, lines);
        ms << "metric,value\n";
        ms << "mean_overlap," << fmt(overlap_sum / static_cast<double>(n_truth)) << '\n';
        try {
            const Metrics m = continuous_eval(dets, truths);
            ms << "auc," << fmt(m.auc) << '\n';
            ms << "max_f1," << fmt(m.max_f1) << '\n';
            ms << "hit_rate," << fmt(m.accuracy) << '\n';
        } catch (const std::invalid_argument&) {
            ms << "auc,-\n";  // needs both hit and miss outcomes
        }
    }
    write_config(out, lines);
    timer.write(out / "timings.txt");
    std::cout << "wrote " << dets.size() << " detections to " << out << '\n';
    return 0;
}

// ---- export-scores ----

struct ExportArgs {
    std::string sequence;
    std::string model_dir;
    bool fft = false;
    std::string out;
};

int cmd_export_scores(const ExportArgs& args) {
    PhaseTimer timer;
    const fs::path out = prepare_out(args.out);
    const Sequence seq = load_sequence(require_input(args.sequence, "--sequence"));
    const fs::path mdir(require_input(args.model_dir, "--model-dir"));
    const LinearModel model = load_linear_model(mdir / "model.bin");
    const MeanWarp pbar = load_mean_warp(mdir / "pbar.bin");
    const WindowGrid grid = load_grid(mdir / "grid.txt");
    timer.mark("load");

    const auto rows = warp_score_table(seq.data, model, pbar, grid, args.fft);
    timer.mark("score");

    std::vector<std::string> lines = base_config("export-scores");
    lines.push_back("sequence=" + args.sequence);
    lines.push_back("model_dir=" + args.model_dir);
    lines.push_back("fft=" + std::string(args.fft ? "1" : "0"));

    std::ofstream os(out / "scores.csv");
    echo_lines(os, lines);
    write_score_table_csv(os, rows);
    os.close();
    write_config(out, lines);
    timer.write(out / "timings.txt");
    std::cout << "wrote score table for " << seq.id << " to " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kVersion) +
                 " - temporal event detection with warp-averaged representations"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--mode", synth_args.mode, "isolated|continuous")
        ->check(CLI::IsMember({"isolated", "continuous"}));
    synth->add_option("--seed", synth_args.cfg.seed, "rng seed");
    synth->add_option("--dims", synth_args.cfg.dims, "feature dimensions");
    synth->add_option("--classes", synth_args.cfg.n_classes, "number of classes");
    synth->add_option("--per-class", synth_args.cfg.per_class, "instances per class");
    synth->add_option("--len-min", synth_args.cfg.len_min, "min instance length");
    synth->add_option("--len-max", synth_args.cfg.len_max, "max instance length");
    synth->add_option("--gamma", synth_args.cfg.warp, "warp strength in [0,1)");
    synth->add_option("--sigma", synth_args.cfg.noise, "noise level");
    synth->add_option("--distractors", synth_args.cfg.distractors,
                      "distractor segments per continuous sequence");
    synth->add_option("--decoys", synth_args.cfg.decoys, "target-free sequences");
    synth->add_option("--bg-len-min", synth_args.cfg.bg_len_min, "distractor min length");
    synth->add_option("--bg-len-max", synth_args.cfg.bg_len_max, "distractor max length");
    synth->add_option("--out", synth_args.out, "output directory")->required();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "cross-validated isolated detection");
    eval->add_option("--manifest", eval_args.manifest)->required();
    eval->add_option("--method", eval_args.method, "linear|dtw-kernel")
        ->check(CLI::IsMember({"linear", "dtw-kernel"}));
    eval->add_option("--encoding", eval_args.encoding,
                     "linear|delta|nonlinear|nonlinear-delta")
        ->check(CLI::IsMember({"linear", "delta", "nonlinear", "nonlinear-delta"}));
    eval->add_option("--pbar", eval_args.pbar, "learned|eye|hist")
        ->check(CLI::IsMember({"learned", "eye", "hist"}));
    eval->add_option("--folds", eval_args.folds);
    eval->add_option("--K", eval_args.K, "codebook size");
    eval->add_option("--K-delta", eval_args.K_delta, "codebook size for delta");
    eval->add_option("--C-grid", eval_args.c_grid, "comma-separated C values");
    eval->add_option("--t-grid", eval_args.t_grid, "comma-separated kernel bandwidths");
    eval->add_option("--T", eval_args.T, "representation length override");
    eval->add_option("--seed", eval_args.seed);
    eval->add_option("--threads", eval_args.threads);
    eval->add_option("--out", eval_args.out)->required();

    AblateArgs ablate_args;
    auto* ablate = app.add_subcommand("ablate", "encoding x pbar ablation grid");
    ablate->add_option("--manifest", ablate_args.manifest)->required();
    ablate->add_option("--folds", ablate_args.folds);
    ablate->add_option("--K", ablate_args.K);
    ablate->add_option("--K-delta", ablate_args.K_delta);
    ablate->add_option("--C-grid", ablate_args.c_grid);
    ablate->add_option("--T", ablate_args.T);
    ablate->add_option("--seed", ablate_args.seed);
    ablate->add_option("--threads", ablate_args.threads);
    ablate->add_option("--out", ablate_args.out)->required();

    TrainIsolatedArgs ti_args;
    auto* ti = app.add_subcommand("train-isolated", "train one-vs-rest linear models");
    ti->add_option("--manifest", ti_args.manifest)->required();
    ti->add_option("--encoding", ti_args.encoding)
        ->check(CLI::IsMember({"linear", "delta", "nonlinear", "nonlinear-delta"}));
    ti->add_option("--pbar", ti_args.pbar)->check(CLI::IsMember({"learned", "eye", "hist"}));
    ti->add_option("--T", ti_args.T);
    ti->add_option("--K", ti_args.K);
    ti->add_option("--C-grid", ti_args.c_grid);
    ti->add_option("--seed", ti_args.seed);
    ti->add_option("--threads", ti_args.threads);
    ti->add_option("--target", ti_args.target, "train only this class");
    ti->add_option("--out", ti_args.out)->required();

    TrainContinuousArgs tc_args;
    auto* tc = app.add_subcommand("train-continuous", "train a continuous event detector");
    tc->add_option("--manifest", tc_args.manifest)->required();
    tc->add_option("--method", tc_args.method, "warp|bow")
        ->check(CLI::IsMember({"warp", "bow"}));
    tc->add_option("--pbar", tc_args.pbar)->check(CLI::IsMember({"learned", "eye", "hist"}));
    tc->add_option("--T", tc_args.T);
    tc->add_option("--K", tc_args.K, "codebook size (bow)");
    tc->add_option("--C", tc_args.C, "structured SVM C");
    tc->add_option("--window-candidates", tc_args.window_candidates);
    tc->add_option("--rounds", tc_args.rounds, "constraint-generation rounds");
    tc->add_option("--epochs", tc_args.epochs, "subgradient epochs per round");
    tc->add_option("--seed", tc_args.seed);
    tc->add_option("--threads", tc_args.threads);
    tc->add_option("--out", tc_args.out)->required();

    DetectArgs detect_args;
    auto* detect = app.add_subcommand("detect", "locate events in continuous sequences");
    detect->add_option("--manifest", detect_args.manifest)->required();
    detect->add_option("--model-dir", detect_args.model_dir)->required();
    detect->add_option("--method", detect_args.method, "warp|bow")
        ->check(CLI::IsMember({"warp", "bow"}));
    detect->add_flag("--fft", detect_args.fft, "frequency-domain scoring");
    detect->add_option("--threads", detect_args.threads);
    detect->add_option("--out", detect_args.out)->required();

    ExportArgs export_args;
    auto* exp = app.add_subcommand("export-scores", "dump the sliding-window score table");
    exp->add_option("--sequence", export_args.sequence)->required();
    exp->add_option("--model-dir", export_args.model_dir)->required();
    exp->add_flag("--fft", export_args.fft);
    exp->add_option("--out", export_args.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*synth) return cmd_synth(synth_args);
        if (*eval) return cmd_eval(eval_args);
        if (*ablate) return cmd_ablate(ablate_args);
        if (*ti) return cmd_train_isolated(ti_args);
        if (*tc) return cmd_train_continuous(tc_args);
        if (*detect) return cmd_detect(detect_args);
        if (*exp) return cmd_export_scores(export_args);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
