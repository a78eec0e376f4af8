#include "warpdet/data_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "serialized artifacts are little-endian");

namespace warpdet {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line,
                             const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) +
                             ": parse error: " + what);
}

double parse_double(const std::string& tok, const std::filesystem::path& path, int line) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') parse_fail(path, line, "bad number '" + tok + "'");
    return v;
}

long parse_long(const std::string& tok, const std::filesystem::path& path, int line) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        parse_fail(path, line, "bad integer '" + tok + "'");
    return v;
}

void write_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t read_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
std::uint64_t read_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
double read_f64(std::istream& is) {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) write_f64(os, m(r, c));
}

Eigen::MatrixXd read_matrix(std::istream& is, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = read_f64(is);
    return m;
}

std::ofstream open_binary_out(const std::filesystem::path& path, const char magic[4]) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os.write(magic, 4);
    const char version = 1;
    os.write(&version, 1);
    return os;
}

std::ifstream open_binary_in(const std::filesystem::path& path, const char magic[4]) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    char got[4] = {};
    is.read(got, 4);
    if (std::memcmp(got, magic, 4) != 0)
        throw std::runtime_error(path.string() + ": wrong magic bytes");
    char version = 0;
    is.read(&version, 1);
    if (version != 1)
        throw std::runtime_error(path.string() + ": unsupported version");
    return is;
}

void check_stream(std::istream& is, const std::filesystem::path& path) {
    if (!is) throw std::runtime_error(path.string() + ": truncated file");
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Sequence load_sequence(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    int lineno = 0;
    if (!std::getline(is, line)) parse_fail(path, 1, "empty file");
    ++lineno;
    const auto header = tokenize(line);
    if (header.size() != 5)
        parse_fail(path, lineno, "header must be 'D M label start end'");
    const long D = parse_long(header[0], path, lineno);
    const long M = parse_long(header[1], path, lineno);
    if (D < 1 || M < 1) parse_fail(path, lineno, "D and M must be positive");

    Sequence seq;
    seq.id = path.stem().string();
    if (header[2] != "-") seq.label = header[2];
    const long start = parse_long(header[3], path, lineno);
    const long end = parse_long(header[4], path, lineno);
    if (start != 0 || end != 0)
        seq.event_span = Span{static_cast<int>(start), static_cast<int>(end)};

    seq.data.resize(D, M);
    for (long d = 0; d < D; ++d) {
        if (!std::getline(is, line)) parse_fail(path, lineno + 1, "missing data row");
        ++lineno;
        const auto toks = tokenize(line);
        if (static_cast<long>(toks.size()) != M)
            parse_fail(path, lineno,
                       "expected " + std::to_string(M) + " values, got " +
                           std::to_string(toks.size()));
        for (long m = 0; m < M; ++m) seq.data(d, m) = parse_double(toks[m], path, lineno);
    }
    seq.validate();
    return seq;
}

void save_sequence(const Sequence& seq, const std::filesystem::path& path) {
    seq.validate();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << seq.dims() << ' ' << seq.frames() << ' '
       << (seq.label.empty() ? "-" : seq.label) << ' '
       << (seq.event_span ? seq.event_span->start : 0) << ' '
       << (seq.event_span ? seq.event_span->end : 0) << '\n';
    for (int d = 0; d < seq.dims(); ++d) {
        for (int m = 0; m < seq.frames(); ++m) {
            if (m) os << ' ';
            os << format_double(seq.data(d, m));
        }
        os << '\n';
    }
}

Dataset load_manifest(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    const std::filesystem::path base = path.parent_path();

    Dataset ds;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto toks = tokenize(line);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "name") {
            if (toks.size() != 2) parse_fail(path, lineno, "name takes one token");
            ds.name = toks[1];
        } else if (key == "dims") {
            if (toks.size() != 2) parse_fail(path, lineno, "dims takes one token");
            ds.dims = static_cast<int>(parse_long(toks[1], path, lineno));
        } else if (key == "classes") {
            ds.class_names.assign(toks.begin() + 1, toks.end());
        } else if (key == "note") {
            ds.note = line.substr(5);
        } else if (key == "seq") {
            if (toks.size() != 3 && toks.size() != 5)
                parse_fail(path, lineno, "seq takes 'path label [start end]'");
            Sequence seq = load_sequence(base / toks[1]);
            seq.id = toks[1];
            seq.label = toks[2];
            if (toks.size() == 5) {
                seq.event_span = Span{static_cast<int>(parse_long(toks[3], path, lineno)),
                                      static_cast<int>(parse_long(toks[4], path, lineno))};
                seq.validate();
            }
            ds.sequences.push_back(std::move(seq));
        } else {
            parse_fail(path, lineno, "unknown directive '" + key + "'");
        }
    }
    if (ds.sequences.empty()) throw std::runtime_error(path.string() + ": no sequences");
    if (ds.dims == 0) ds.dims = ds.sequences.front().dims();
    for (const auto& s : ds.sequences)
        if (s.dims() != ds.dims)
            throw std::runtime_error(path.string() + ": sequence '" + s.id +
                                     "' has dims " + std::to_string(s.dims()) +
                                     ", manifest says " + std::to_string(ds.dims));
    if (ds.class_names.empty()) {
        for (const auto& s : ds.sequences) {
            if (s.label.empty() || s.label == "-") continue;
            if (std::find(ds.class_names.begin(), ds.class_names.end(), s.label) ==
                ds.class_names.end())
                ds.class_names.push_back(s.label);
        }
        std::sort(ds.class_names.begin(), ds.class_names.end());
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "seqs");
    std::ofstream os(dir / "manifest.txt");
    if (!os) throw std::runtime_error("cannot write manifest in " + dir.string());
    os << "name " << (ds.name.empty() ? "dataset" : ds.name) << '\n';
    os << "dims " << ds.dims << '\n';
    if (!ds.class_names.empty()) {
        os << "classes";
        for (const auto& c : ds.class_names) os << ' ' << c;
        os << '\n';
    }
    if (!ds.note.empty()) os << "note " << ds.note << '\n';
    for (const auto& seq : ds.sequences) {
        const std::string rel = "seqs/" + seq.id + ".txt";
        save_sequence(seq, dir / rel);
        os << "seq " << rel << ' ' << (seq.label.empty() ? "-" : seq.label);
        if (seq.event_span) os << ' ' << seq.event_span->start << ' ' << seq.event_span->end;
        os << '\n';
    }
}

void save_mean_warp(const MeanWarp& pbar, const std::filesystem::path& path) {
    auto os = open_binary_out(path, "WDPB");
    const char mode = pbar.mode == WarpMode::Learned ? 0 : pbar.mode == WarpMode::Eye ? 1 : 2;
    os.write(&mode, 1);
    write_u32(os, static_cast<std::uint32_t>(pbar.T));
    write_matrix(os, pbar.data);
}

MeanWarp load_mean_warp(const std::filesystem::path& path) {
    auto is = open_binary_in(path, "WDPB");
    char mode = 0;
    is.read(&mode, 1);
    const auto T = static_cast<Eigen::Index>(read_u32(is));
    MeanWarp pbar;
    pbar.mode = mode == 0 ? WarpMode::Learned : mode == 1 ? WarpMode::Eye : WarpMode::Hist;
    pbar.T = static_cast<int>(T);
    pbar.data = read_matrix(is, T, T);
    check_stream(is, path);
    return pbar;
}

void save_linear_model(const LinearModel& model, const std::filesystem::path& path) {
    auto os = open_binary_out(path, "WDLM");
    write_u32(os, static_cast<std::uint32_t>(model.W.rows()));
    write_u32(os, static_cast<std::uint32_t>(model.W.cols()));
    write_f64(os, model.bias);
    write_f64(os, model.trainC);
    write_u32(os, static_cast<std::uint32_t>(model.meanwarp_ref.size()));
    os.write(model.meanwarp_ref.data(),
             static_cast<std::streamsize>(model.meanwarp_ref.size()));
    write_matrix(os, model.W);
}

LinearModel load_linear_model(const std::filesystem::path& path) {
    auto is = open_binary_in(path, "WDLM");
    const auto D = static_cast<Eigen::Index>(read_u32(is));
    const auto T = static_cast<Eigen::Index>(read_u32(is));
    LinearModel model;
    model.bias = read_f64(is);
    model.trainC = read_f64(is);
    const auto len = read_u32(is);
    model.meanwarp_ref.resize(len);
    is.read(model.meanwarp_ref.data(), len);
    model.W = read_matrix(is, D, T);
    check_stream(is, path);
    return model;
}

void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
    auto os = open_binary_out(path, "WDCB");
    write_u32(os, static_cast<std::uint32_t>(cb.K));
    write_u32(os, static_cast<std::uint32_t>(cb.D));
    write_u64(os, cb.train_seed);
    write_matrix(os, cb.centers);
}

Codebook load_codebook(const std::filesystem::path& path) {
    auto is = open_binary_in(path, "WDCB");
    Codebook cb;
    cb.K = static_cast<int>(read_u32(is));
    cb.D = static_cast<int>(read_u32(is));
    cb.train_seed = read_u64(is);
    cb.centers = read_matrix(is, cb.K, cb.D);
    check_stream(is, path);
    return cb;
}

void save_bow_weights(const Eigen::VectorXd& w, double bias,
                      const std::filesystem::path& path) {
    auto os = open_binary_out(path, "WDBW");
    write_u32(os, static_cast<std::uint32_t>(w.size()));
    write_f64(os, bias);
    for (Eigen::Index k = 0; k < w.size(); ++k) write_f64(os, w(k));
}

std::pair<Eigen::VectorXd, double> load_bow_weights(const std::filesystem::path& path) {
    auto is = open_binary_in(path, "WDBW");
    const auto K = static_cast<Eigen::Index>(read_u32(is));
    const double bias = read_f64(is);
    Eigen::VectorXd w(K);
    for (Eigen::Index k = 0; k < K; ++k) w(k) = read_f64(is);
    check_stream(is, path);
    return {w, bias};
}

void save_grid(const WindowGrid& grid, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    for (int len : grid.lengths) os << len << '\n';
}

WindowGrid load_grid(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    WindowGrid grid;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        grid.lengths.push_back(static_cast<int>(parse_long(line, path, lineno)));
    }
    if (grid.lengths.empty()) throw std::runtime_error(path.string() + ": empty grid");
    return grid;
}

}  // namespace warpdet
