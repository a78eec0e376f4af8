#include "warpdet/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "warpdet/rng.hpp"

namespace warpdet {

void SynthConfig::validate() const {
    if (dims < 1) throw std::invalid_argument("synth: dims must be positive");
    if (n_classes < 1) throw std::invalid_argument("synth: need at least one class");
    if (per_class < 1) throw std::invalid_argument("synth: per_class must be positive");
    if (len_min < 4) throw std::invalid_argument("synth: len_min must be at least 4");
    if (len_max < len_min) throw std::invalid_argument("synth: len_max < len_min");
    if (warp < 0.0 || warp >= 1.0) throw std::invalid_argument("synth: warp must be in [0,1)");
    if (noise < 0.0) throw std::invalid_argument("synth: noise must be nonnegative");
    if (distractors < 0) throw std::invalid_argument("synth: distractors must be nonnegative");
    if (decoys < 0) throw std::invalid_argument("synth: decoys must be nonnegative");
}

namespace {

// Per-harmonic template amplitude. Sized so the configured noise levels are
// a meaningful fraction of the signal.
constexpr double kTemplateAmplitude = 0.015;

// Smooth class template: per dimension the sum of three harmonics with
// random phases. Integer frequencies keep the per-dimension value histogram
// nearly phase-invariant, so class identity lives mostly in the temporal
// ordering.
Eigen::MatrixXd make_template(const SynthConfig& cfg, int cls) {
    Rng rng(mix_seed(cfg.seed, 0x7E000000ULL + static_cast<std::uint64_t>(cls)));
    const int L = cfg.len_max;
    Eigen::MatrixXd tpl(cfg.dims, L);
    for (int d = 0; d < cfg.dims; ++d) {
        const double p1 = rng.uniform(0.0, 2.0 * M_PI);
        const double p2 = rng.uniform(0.0, 2.0 * M_PI);
        const double p3 = rng.uniform(0.0, 2.0 * M_PI);
        for (int m = 0; m < L; ++m) {
            const double u = static_cast<double>(m) / static_cast<double>(L - 1);
            tpl(d, m) = kTemplateAmplitude *
                        (std::sin(4.0 * M_PI * u + p1) + std::sin(8.0 * M_PI * u + p2) +
                         std::sin(12.0 * M_PI * u + p3));
        }
    }
    return tpl;
}

// Monotone source positions in [1, Lt] for an instance of length L. The
// reading speed is modulated by a smooth random profile with amplitude
// gamma < 1, so positions never move backwards and the time distortion is
// macroscopic rather than frame-level jitter; gamma = 0 gives the uniform
// interpolation grid.
std::vector<double> warp_positions(int Lt, int L, double gamma, Rng& rng) {
    const double b1 = rng.uniform(0.3, 1.0);
    const double b2 = rng.uniform(0.3, 1.0);
    const double p1 = rng.uniform(0.0, 2.0 * M_PI);
    const double p2 = rng.uniform(0.0, 2.0 * M_PI);
    const double norm = b1 + b2;
    std::vector<double> cum(L, 0.0);
    for (int j = 1; j < L; ++j) {
        const double u = static_cast<double>(j - 1) / static_cast<double>(L - 1);
        const double speed_mod =
            (b1 * std::sin(M_PI * u + p1) + b2 * std::sin(2.0 * M_PI * u + p2)) / norm;
        cum[j] = cum[j - 1] + 1.0 + gamma * speed_mod;
    }
    const double total = cum.back();
    std::vector<double> pos(L);
    for (int j = 0; j < L; ++j)
        pos[j] = 1.0 + (cum[j] / total) * static_cast<double>(Lt - 1);
    return pos;
}

Eigen::MatrixXd make_instance(const Eigen::MatrixXd& tpl, const SynthConfig& cfg,
                              Rng& rng) {
    const int Lt = static_cast<int>(tpl.cols());
    const int L = rng.uniform_int(cfg.len_min, cfg.len_max);
    const auto pos = warp_positions(Lt, L, cfg.warp, rng);
    Eigen::MatrixXd inst(tpl.rows(), L);
    for (int j = 0; j < L; ++j) {
        const double s = std::min(std::max(pos[j], 1.0), static_cast<double>(Lt));
        const int lo = static_cast<int>(std::floor(s));
        const int hi = static_cast<int>(std::ceil(s));
        if (lo == hi) {
            inst.col(j) = tpl.col(lo - 1);
        } else {
            inst.col(j) = (static_cast<double>(hi) - s) * tpl.col(lo - 1) +
                          (s - static_cast<double>(lo)) * tpl.col(hi - 1);
        }
    }
    if (cfg.noise > 0.0) {
        for (int j = 0; j < L; ++j)
            for (int d = 0; d < inst.rows(); ++d) inst(d, j) += cfg.noise * rng.gaussian();
    }
    return inst;
}

std::string class_name(int cls) { return "c" + std::to_string(cls); }

std::string zero_pad(int v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

}  // namespace

Dataset synth_isolated(const SynthConfig& cfg) {
    cfg.validate();
    Dataset ds;
    ds.name = "synth-isolated";
    ds.dims = cfg.dims;
    ds.note = "synthetic warped sinusoid templates";

    std::vector<Eigen::MatrixXd> templates;
    for (int c = 0; c < cfg.n_classes; ++c) {
        templates.push_back(make_template(cfg, c));
        ds.class_names.push_back(class_name(c));
    }

    for (int c = 0; c < cfg.n_classes; ++c) {
        Rng rng(mix_seed(cfg.seed, 0x15000000ULL + static_cast<std::uint64_t>(c)));
        for (int i = 0; i < cfg.per_class; ++i) {
            Sequence seq;
            seq.id = class_name(c) + "_" + zero_pad(i, 3);
            seq.label = class_name(c);
            seq.data = make_instance(templates[c], cfg, rng);
            ds.sequences.push_back(std::move(seq));
        }
    }
    return ds;
}

Dataset synth_continuous(const SynthConfig& cfg) {
    cfg.validate();
    if (cfg.n_classes < 2)
        throw std::invalid_argument("synth_continuous: need distractor classes");
    Dataset ds;
    ds.name = "synth-continuous";
    ds.dims = cfg.dims;
    ds.class_names = {"target", "decoy"};
    ds.note = "one planted class-0 event among distractor segments";

    std::vector<Eigen::MatrixXd> templates;
    for (int c = 0; c < cfg.n_classes; ++c) templates.push_back(make_template(cfg, c));

    SynthConfig bg = cfg;
    if (cfg.bg_len_min > 0) bg.len_min = cfg.bg_len_min;
    if (cfg.bg_len_max > 0) bg.len_max = cfg.bg_len_max;

    // decoys carry a distractor in the target's slot, so both kinds of
    // sequence share the same length distribution
    auto build = [&](Rng& rng, bool with_target, const std::string& id) {
        const int segments = cfg.distractors + 1;
        const int target_slot = with_target ? rng.uniform_int(0, cfg.distractors) : -1;
        std::vector<Eigen::MatrixXd> parts;
        int target_start = 0, target_end = 0, at = 0;
        for (int s = 0; s < segments; ++s) {
            Eigen::MatrixXd part;
            if (s == target_slot) {
                part = make_instance(templates[0], cfg, rng);
                target_start = at + 1;
                target_end = at + static_cast<int>(part.cols());
            } else {
                const int cls = rng.uniform_int(1, cfg.n_classes - 1);
                part = make_instance(templates[cls], bg, rng);
            }
            at += static_cast<int>(part.cols());
            parts.push_back(std::move(part));
        }
        Sequence seq;
        seq.id = id;
        seq.label = with_target ? "target" : "decoy";
        seq.data.resize(cfg.dims, at);
        int col = 0;
        for (const auto& p : parts) {
            seq.data.middleCols(col, p.cols()) = p;
            col += static_cast<int>(p.cols());
        }
        if (with_target) seq.event_span = Span{target_start, target_end};
        return seq;
    };

    for (int i = 0; i < cfg.per_class; ++i) {
        Rng rng(mix_seed(cfg.seed, 0xC0000000ULL + static_cast<std::uint64_t>(i)));
        ds.sequences.push_back(build(rng, true, "word_" + zero_pad(i, 3)));
    }
    for (int i = 0; i < cfg.decoys; ++i) {
        Rng rng(mix_seed(cfg.seed, 0xD0000000ULL + static_cast<std::uint64_t>(i)));
        ds.sequences.push_back(build(rng, false, "decoy_" + zero_pad(i, 3)));
    }
    return ds;
}

}  // namespace warpdet
