#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "bclab/sim.hpp"

namespace bcl {

/// Full-precision decimal so downstream fits are reproducible.
std::string format_g17(double v);

/// CSV with a fixed header; numeric cells are written at 17 significant
/// digits.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(std::span<const double> values);
    void row(const std::vector<std::string>& cells);
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
    size_t columns_;
};

// Binary checkpoint layout (little-endian):
//   magic "BCLCHK01" (8 bytes), u32 version = 1, u32 m, u32 n,
//   f64 Lx, f64 nu, f64 time,
//   then for each mode j = 0..m/2-1 the arrays omega, theta, psi as
//   (n+1) complex64 values (float32 re, float32 im), then mean_shear as
//   one more (n+1) complex64 array.
void save_checkpoint(const SimState& s, double nu, const std::filesystem::path& path);
SimState load_checkpoint(const std::filesystem::path& path, double* nu_out = nullptr);

}  // namespace bcl
