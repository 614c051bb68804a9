#include "trmax/synth.hpp"

#include "trmax/linalg.hpp"
#include "trmax/rng.hpp"

#include <string>

namespace trmax {

namespace {

// U diag(v) U^T with U the eigenvector factor of a symmetrized
// standard-normal draw and v uniform(0,1) + shift; the eigenvalues of the
// result are the entries of v, so it is positive definite.
SymmetricMatrix random_spd(Index n, StreamRng& rng, double shift) {
  const Matrix g = rng.normal_matrix(n, n);
  const SymmetricMatrix gs(0.5 * (g + g.transpose()),
                           SymmetricMatrix::Input::Strict);
  const EigenPairs eig = sym_eig_full(gs);
  const Vector v =
      (rng.uniform_vector(n).array() + shift).matrix();
  Matrix a = eig.vectors * v.asDiagonal() * eig.vectors.transpose();
  return SymmetricMatrix(std::move(a), SymmetricMatrix::Input::Symmetrize);
}

}  // namespace

TraceRatioProblem generate(const SynthSpec& spec, double theta) {
  if (spec.k < 1 || spec.k >= spec.n) {
    throw DimensionError("generate: need 1 <= k < n, got k = " +
                         std::to_string(spec.k) + ", n = " +
                         std::to_string(spec.n));
  }
  StreamRng rng_a(spec.seed, 0);
  StreamRng rng_b(spec.seed, 1);
  StreamRng rng_d(spec.seed, 2);
  SymmetricMatrix a = random_spd(spec.n, rng_a, spec.spd_shift);
  SymmetricMatrix b = random_spd(spec.n, rng_b, spec.spd_shift);
  Matrix d = rng_d.normal_matrix(spec.n, spec.k);
  return TraceRatioProblem(std::move(a), std::move(b), std::move(d), theta);
}

TraceRatioProblem generate_sphere_oracle_instance(std::uint64_t seed,
                                                  double theta) {
  return generate(SynthSpec{3, 1, seed, 1e-6}, theta);
}

}  // namespace trmax
