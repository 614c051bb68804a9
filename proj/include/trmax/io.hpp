#pragma once

#include "trmax/multiview.hpp"
#include "trmax/problem.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace trmax::io {

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Binary problem file: magic "TRPB", u32 version, u64 n, u64 k, f64 theta,
/// then A (n*n), B (n*n), D (n*k) as row-major little-endian f64.
void write_problem(const std::filesystem::path& path,
                   const TraceRatioProblem& p);
TraceRatioProblem read_problem(const std::filesystem::path& path);

/// Dataset directory: manifest.json naming one CSV per view (rows =
/// features, columns = samples) and a labels CSV (one integer per line).
void write_dataset(const std::filesystem::path& dir,
                   const MultiViewDataset& ds);
MultiViewDataset read_dataset(const std::filesystem::path& dir);

/// Matrix CSV with 17-significant-digit values (round-trips doubles
/// exactly).
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Shortest-exact decimal rendering used in all text output.
std::string format_double(double v);

/// FNV-1a 64-bit hash; stable across platforms, used for config hashes in
/// CSV comment headers.
std::uint64_t fnv1a64(const std::string& s);

}  // namespace trmax::io
