#pragma once

#include <cstdint>

#include "warpdet/data_io.hpp"

namespace warpdet {

// Generator settings for the synthetic benchmarks. Everything is a pure
// function of this struct, so identical configs give identical datasets.
struct SynthConfig {
    std::uint64_t seed = 0;
    int dims = 2;
    int n_classes = 2;
    int per_class = 20;   // instances per class (continuous: target-bearing count)
    int len_min = 24;
    int len_max = 48;
    double warp = 0.3;    // gamma in [0,1): strength of the random monotone warp
    double noise = 0.05;  // sigma of additive Gaussian noise

    // continuous task only
    int distractors = 10;  // non-target segments per sequence
    int bg_len_min = 0;    // 0 = use len_min/len_max for distractor segments
    int bg_len_max = 0;
    int decoys = 0;        // sequences containing no target at all

    void validate() const;
};

// Per class, a smooth template (sum of 3 random-phase sinusoids per
// dimension); each instance is the template read through a random monotone
// time warp plus Gaussian noise. warp = 0, noise = 0 reduces to a plain
// resample of the template.
Dataset synth_isolated(const SynthConfig& cfg);

// Each target-bearing sequence concatenates distractor-class instances with
// exactly one class-0 ("target") instance at a recorded span. Decoy
// sequences contain distractors only.
Dataset synth_continuous(const SynthConfig& cfg);

}  // namespace warpdet
