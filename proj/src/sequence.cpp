#include "warpdet/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace warpdet {

double span_overlap(const Span& a, const Span& b) {
    const int inter = std::min(a.end, b.end) - std::max(a.start, b.start) + 1;
    if (inter <= 0) return 0.0;
    const int uni = std::max(a.end, b.end) - std::min(a.start, b.start) + 1;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

const char* encoding_name(EncodingKind k) {
    switch (k) {
        case EncodingKind::Linear: return "linear";
        case EncodingKind::Delta: return "delta";
        case EncodingKind::NonLinear: return "nonlinear";
        case EncodingKind::NonLinearDelta: return "nonlinear-delta";
    }
    return "?";
}

EncodingKind encoding_from_name(const std::string& name) {
    if (name == "linear") return EncodingKind::Linear;
    if (name == "delta") return EncodingKind::Delta;
    if (name == "nonlinear") return EncodingKind::NonLinear;
    if (name == "nonlinear-delta") return EncodingKind::NonLinearDelta;
    throw std::invalid_argument("unknown encoding '" + name + "'");
}

void Sequence::validate() const {
    if (data.rows() < 1 || data.cols() < 1)
        throw std::invalid_argument("sequence '" + id + "': empty data");
    if (!data.allFinite())
        throw std::invalid_argument("sequence '" + id + "': non-finite entries");
    if (event_span) {
        if (event_span->start < 1 || event_span->start > event_span->end ||
            event_span->end > frames())
            throw std::invalid_argument("sequence '" + id + "': event span out of range");
    }
}

Eigen::MatrixXd interp_matrix(int M, int T) {
    if (M < 1 || T < 1) throw std::invalid_argument("interp_matrix: M and T must be positive");
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(M, T);
    if (M == 1) {
        P.setOnes();
        return P;
    }
    for (int t = 0; t < T; ++t) {
        double s = (T == 1) ? 1.0
                            : 1.0 + static_cast<double>(t) * static_cast<double>(M - 1) /
                                        static_cast<double>(T - 1);
        s = std::clamp(s, 1.0, static_cast<double>(M));
        const int lo = static_cast<int>(std::floor(s));
        const int hi = static_cast<int>(std::ceil(s));
        if (lo == hi) {
            P(lo - 1, t) = 1.0;
        } else {
            P(lo - 1, t) = static_cast<double>(hi) - s;
            P(hi - 1, t) = s - static_cast<double>(lo);
        }
    }
    return P;
}

Sequence resample(const Sequence& x, int T) {
    x.validate();
    Sequence out;
    out.id = x.id;
    out.label = x.label;
    out.data = x.data * interp_matrix(x.frames(), T);
    return out;
}

Sequence delta_encode(const Sequence& x) {
    x.validate();
    const int M = x.frames();
    if (M < 2) throw std::invalid_argument("delta_encode: sequence too short for delta");
    Sequence out;
    out.id = x.id;
    out.label = x.label;
    out.data = x.data.rightCols(M - 1) - x.data.leftCols(M - 1);
    return out;
}

}  // namespace warpdet
