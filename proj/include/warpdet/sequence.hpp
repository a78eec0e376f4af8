#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

namespace warpdet {

// Inclusive 1-based frame span.
struct Span {
    int start = 0;
    int end = 0;
};

// |intersection| / |union| of two spans.
double span_overlap(const Span& a, const Span& b);

enum class EncodingKind { Linear, Delta, NonLinear, NonLinearDelta };

const char* encoding_name(EncodingKind k);
EncodingKind encoding_from_name(const std::string& name);

// A multivariate sequence: column m of `data` is the frame vector x_m.
struct Sequence {
    std::string id;
    Eigen::MatrixXd data;  // D x M
    std::string label;     // empty = unlabeled
    std::optional<Span> event_span;

    int dims() const { return static_cast<int>(data.rows()); }
    int frames() const { return static_cast<int>(data.cols()); }

    // Throws std::invalid_argument on non-finite entries, empty data, or an
    // out-of-range event span.
    void validate() const;
};

// M x T linear-interpolation matrix. Column t carries the weights for source
// position s_t = 1 + (t-1)(M-1)/(T-1); every column sums to 1 and touches at
// most two adjacent rows.
Eigen::MatrixXd interp_matrix(int M, int T);

// X * interp_matrix(M, T): stretches or squeezes X to T frames.
Sequence resample(const Sequence& x, int T);

// Differential signal; output column n is x_{n+1} - x_n (M-1 columns).
Sequence delta_encode(const Sequence& x);

}  // namespace warpdet
