#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "warpdet/data_io.hpp"
#include "warpdet/rng.hpp"

using namespace warpdet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("warpdet_test_" + std::to_string(Rng(std::random_device{}()).raw()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Sequence random_sequence(Rng& rng, const std::string& id, int d, int m) {
    Sequence s;
    s.id = id;
    s.data.resize(d, m);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < m; ++j) s.data(i, j) = rng.uniform(-10, 10);
    return s;
}

}  // namespace

TEST_CASE("sequence file round-trips bitwise") {
    TempDir tmp;
    Rng rng(77);
    Sequence s = random_sequence(rng, "roundtrip", 2, 3);
    s.data(0, 0) = 1.0 / 3.0;
    s.data(1, 2) = -1e-17;
    s.label = "c1";
    s.event_span = Span{1, 2};
    const fs::path file = tmp.path / "seq.txt";
    save_sequence(s, file);
    const Sequence back = load_sequence(file);
    CHECK(back.dims() == 2);
    CHECK(back.frames() == 3);
    CHECK((back.data - s.data).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.label == "c1");
    REQUIRE(back.event_span.has_value());
    CHECK(back.event_span->start == 1);
    CHECK(back.event_span->end == 2);
    CHECK(back.id == "seq");

    // unlabeled, no span
    Sequence bare = random_sequence(rng, "bare", 1, 4);
    save_sequence(bare, file);
    const Sequence bare_back = load_sequence(file);
    CHECK(bare_back.label.empty());
    CHECK_FALSE(bare_back.event_span.has_value());
}

TEST_CASE("sequence parse errors carry line numbers") {
    TempDir tmp;
    const fs::path empty = tmp.path / "empty.txt";
    std::ofstream(empty).close();
    CHECK_THROWS_WITH_AS(load_sequence(empty), doctest::Contains(":1:"),
                         std::runtime_error);

    const fs::path bad = tmp.path / "bad.txt";
    {
        std::ofstream os(bad);
        os << "3 2 - 0 0\n";
        os << "1 2\n";
        os << "3 4 5\n";  // wrong width at line 3
        os << "6 7\n";
    }
    CHECK_THROWS_WITH_AS(load_sequence(bad), doctest::Contains(":3:"),
                         std::runtime_error);
}

TEST_CASE("dataset save/load round trip through the manifest") {
    TempDir tmp;
    Rng rng(78);
    Dataset ds;
    ds.name = "toy";
    ds.dims = 2;
    ds.class_names = {"a", "b"};
    ds.note = "round trip check";
    for (int i = 0; i < 4; ++i) {
        Sequence s = random_sequence(rng, "s" + std::to_string(i), 2, 3 + i);
        s.label = i % 2 == 0 ? "a" : "b";
        if (i == 1) s.event_span = Span{2, 3};
        ds.sequences.push_back(std::move(s));
    }
    save_dataset(ds, tmp.path);
    const Dataset back = load_manifest(tmp.path / "manifest.txt");
    CHECK(back.name == "toy");
    CHECK(back.dims == 2);
    CHECK(back.class_names == ds.class_names);
    REQUIRE(back.sequences.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK((back.sequences[i].data - ds.sequences[i].data).cwiseAbs().maxCoeff() == 0.0);
        CHECK(back.sequences[i].label == ds.sequences[i].label);
    }
    REQUIRE(back.sequences[1].event_span.has_value());
    CHECK(back.sequences[1].event_span->start == 2);
}

TEST_CASE("manifest rejects mixed dimensionality") {
    TempDir tmp;
    Rng rng(79);
    save_sequence(random_sequence(rng, "a", 2, 3), tmp.path / "a.txt");
    save_sequence(random_sequence(rng, "b", 3, 3), tmp.path / "b.txt");
    {
        std::ofstream os(tmp.path / "manifest.txt");
        os << "name mixed\nseq a.txt x\nseq b.txt y\n";
    }
    CHECK_THROWS_AS(load_manifest(tmp.path / "manifest.txt"), std::runtime_error);
}

TEST_CASE("binary artifacts round trip") {
    TempDir tmp;
    Rng rng(80);

    MeanWarp pbar = fixed_warp(5, WarpMode::Hist);
    save_mean_warp(pbar, tmp.path / "pbar.bin");
    const MeanWarp pb = load_mean_warp(tmp.path / "pbar.bin");
    CHECK(pb.mode == WarpMode::Hist);
    CHECK(pb.T == 5);
    CHECK((pb.data - pbar.data).cwiseAbs().maxCoeff() == 0.0);

    LinearModel model;
    model.W.resize(2, 4);
    for (int i = 0; i < 8; ++i) model.W(i / 4, i % 4) = rng.uniform(-1, 1);
    model.bias = 0.125;
    model.trainC = 10.0;
    model.meanwarp_ref = "learned";
    save_linear_model(model, tmp.path / "model.bin");
    const LinearModel lm = load_linear_model(tmp.path / "model.bin");
    CHECK((lm.W - model.W).cwiseAbs().maxCoeff() == 0.0);
    CHECK(lm.bias == model.bias);
    CHECK(lm.trainC == model.trainC);
    CHECK(lm.meanwarp_ref == "learned");

    Codebook cb;
    cb.K = 3;
    cb.D = 2;
    cb.train_seed = 42;
    cb.centers.resize(3, 2);
    for (int i = 0; i < 6; ++i) cb.centers(i / 2, i % 2) = rng.uniform(-2, 2);
    save_codebook(cb, tmp.path / "cb.bin");
    const Codebook cb2 = load_codebook(tmp.path / "cb.bin");
    CHECK(cb2.K == 3);
    CHECK(cb2.D == 2);
    CHECK(cb2.train_seed == 42);
    CHECK((cb2.centers - cb.centers).cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXd w(3);
    w << 0.5, -0.25, 2.0;
    save_bow_weights(w, -0.75, tmp.path / "bow.bin");
    const auto [w2, bias2] = load_bow_weights(tmp.path / "bow.bin");
    CHECK((w2 - w).cwiseAbs().maxCoeff() == 0.0);
    CHECK(bias2 == -0.75);

    WindowGrid grid;
    grid.lengths = {4, 9, 17};
    save_grid(grid, tmp.path / "grid.txt");
    CHECK(load_grid(tmp.path / "grid.txt").lengths == grid.lengths);

    // wrong magic is rejected
    CHECK_THROWS_AS(load_linear_model(tmp.path / "pbar.bin"), std::runtime_error);
}
