#pragma once

#include "trmax/types.hpp"

#include <cstdint>
#include <random>

namespace trmax {

/// Deterministic random stream. The engine is std::mt19937_64 (bit-exact by
/// the standard); the uniform and normal transforms are implemented here
/// rather than with std::*_distribution so that draws are identical across
/// standard libraries. Stream splitting: the engine seed is
/// splitmix64(seed XOR stream * 0x9E3779B97F4A7C15), so distinct stream ids
/// give independent sequences from one user seed.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed, std::uint64_t stream = 0);

  static std::uint64_t splitmix64(std::uint64_t x);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  /// Standard normal via Box-Muller (pairs cached).
  double normal();

  /// Uniform integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

  /// Column-major fill of independent standard normals.
  Matrix normal_matrix(Index rows, Index cols);

  /// Independent uniform [0, 1) entries.
  Vector uniform_vector(Index n);

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace trmax
