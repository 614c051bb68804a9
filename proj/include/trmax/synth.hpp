#pragma once

#include "trmax/problem.hpp"

#include <cstdint>

namespace trmax {

/// Recipe for a random test instance: A = U diag(v) U^T with U the
/// eigenvector factor of a symmetrized standard-normal matrix and
/// v ~ uniform(0,1) + spd_shift (so A is positive definite), B drawn the
/// same way from an independent stream, D standard normal n-by-k.
struct SynthSpec {
  Index n;
  Index k;
  std::uint64_t seed;
  double spd_shift = 1e-6;
};

/// Deterministic per (spec, theta). Streams: 0 -> A, 1 -> B, 2 -> D.
TraceRatioProblem generate(const SynthSpec& spec, double theta);

/// Tiny n = 3, k = 1 instance with A, B positive definite and D nonzero,
/// sized for exhaustive maximization over a degree-resolution sphere grid.
TraceRatioProblem generate_sphere_oracle_instance(std::uint64_t seed,
                                                  double theta);

}  // namespace trmax
