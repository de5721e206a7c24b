#include "bclab/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>

#include "bclab/errors.hpp"

namespace bcl {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
    if (!out_) throw config_error("cannot open output file: " + path.string());
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
    if (values.size() != columns_) throw dimension_error("CsvWriter: wrong number of cells");
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_g17(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw dimension_error("CsvWriter: wrong number of cells");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

namespace {

constexpr char kMagic[8] = {'B', 'C', 'L', 'C', 'H', 'K', '0', '1'};

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

void put_field(std::ofstream& out, const Eigen::VectorXcd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        put(out, static_cast<float>(v(i).real()));
        put(out, static_cast<float>(v(i).imag()));
    }
}

Eigen::VectorXcd take_field(std::ifstream& in, int len) {
    Eigen::VectorXcd v(len);
    for (int i = 0; i < len; ++i) {
        const float re = take<float>(in);
        const float im = take<float>(in);
        v(i) = complex(re, im);
    }
    return v;
}

}  // namespace

void save_checkpoint(const SimState& s, double nu, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open checkpoint for writing: " + path.string());
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, 1);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.xgrid.m));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid->n));
    put<double>(out, s.xgrid.box_length);
    put<double>(out, nu);
    put<double>(out, s.time);
    for (int j = 0; j < s.mode_count(); ++j) {
        put_field(out, s.omega.col(j));
        put_field(out, s.theta.col(j));
        put_field(out, s.psi.col(j));
    }
    put_field(out, s.mean_shear.cast<complex>());
    if (!out) throw config_error("checkpoint write failed: " + path.string());
}

SimState load_checkpoint(const std::filesystem::path& path, double* nu_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open checkpoint: " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw config_error("not a checkpoint file: " + path.string());
    const auto version = take<std::uint32_t>(in);
    if (version != 1) throw config_error("unsupported checkpoint version");
    const int m = static_cast<int>(take<std::uint32_t>(in));
    const int n = static_cast<int>(take<std::uint32_t>(in));
    const double lx = take<double>(in);
    const double nu = take<double>(in);
    const double time = take<double>(in);

    SimState s;
    s.time = time;
    s.grid = std::make_shared<const ChebGrid>(build_cheb_grid(n));
    s.xgrid = build_x_grid(lx, m);
    const int mh = m / 2;
    s.omega.resize(n + 1, mh);
    s.theta.resize(n + 1, mh);
    s.psi.resize(n + 1, mh);
    for (int j = 0; j < mh; ++j) {
        s.omega.col(j) = take_field(in, n + 1);
        s.theta.col(j) = take_field(in, n + 1);
        s.psi.col(j) = take_field(in, n + 1);
    }
    s.mean_shear = take_field(in, n + 1).real();
    if (!in) throw config_error("truncated checkpoint: " + path.string());
    if (nu_out) *nu_out = nu;
    return s;
}

}  // namespace bcl
