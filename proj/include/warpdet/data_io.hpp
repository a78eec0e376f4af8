#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "warpdet/classify.hpp"
#include "warpdet/detect.hpp"
#include "warpdet/encoding.hpp"
#include "warpdet/sequence.hpp"
#include "warpdet/warp_rep.hpp"

namespace warpdet {

struct Dataset {
    std::string name;
    int dims = 0;
    std::vector<std::string> class_names;
    std::string note;
    std::vector<Sequence> sequences;
};

// Textual sequence format: header "D M label start end" ('-' and "0 0" are
// the missing-value sentinels), then D rows of M decimal values written with
// 17 significant digits, so load(save(x)) round-trips bitwise.
Sequence load_sequence(const std::filesystem::path& path);
void save_sequence(const Sequence& seq, const std::filesystem::path& path);

// Plain-text manifest listing relative sequence paths with labels/spans.
// Loading parses every referenced file and rejects mixed dimensionality.
Dataset load_manifest(const std::filesystem::path& path);

// Writes sequences under dir/seqs/ and a manifest.txt next to them.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);

// Binary artifacts: 4 magic bytes, a version byte, then fixed-width
// little-endian payload with row-major 64-bit floats.
void save_mean_warp(const MeanWarp& pbar, const std::filesystem::path& path);
MeanWarp load_mean_warp(const std::filesystem::path& path);

void save_linear_model(const LinearModel& model, const std::filesystem::path& path);
LinearModel load_linear_model(const std::filesystem::path& path);

void save_codebook(const Codebook& cb, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

void save_bow_weights(const Eigen::VectorXd& w, double bias,
                      const std::filesystem::path& path);
std::pair<Eigen::VectorXd, double> load_bow_weights(const std::filesystem::path& path);

void save_grid(const WindowGrid& grid, const std::filesystem::path& path);
WindowGrid load_grid(const std::filesystem::path& path);

// Formats a double with 17 significant digits (the sequence-file format).
std::string format_double(double v);

}  // namespace warpdet
