#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"
#include "trmax/problem.hpp"
#include "trmax/rng.hpp"

#include <cmath>

using namespace trmax;

namespace {

SymmetricMatrix sym(Matrix m) {
  return SymmetricMatrix(std::move(m), SymmetricMatrix::Input::Symmetrize);
}

// Well-conditioned random instance: A symmetric, B positive definite,
// moderate D.
TraceRatioProblem random_problem(Index n, Index k, double theta,
                                 std::uint64_t seed, bool zero_d = false) {
  StreamRng rng(seed, 101);
  const Matrix ga = rng.normal_matrix(n, n);
  const Matrix gb = rng.normal_matrix(n, n);
  Matrix b = gb * gb.transpose() / static_cast<double>(n);
  b.diagonal().array() += 0.1;
  Matrix d = zero_d ? Matrix::Zero(n, k) : Matrix(0.5 * rng.normal_matrix(n, k));
  return TraceRatioProblem(sym(0.5 * (ga + ga.transpose())), sym(b),
                           std::move(d), theta);
}

StiefelPoint random_point(Index n, Index k, std::uint64_t seed) {
  StreamRng rng(seed, 102);
  return StiefelPoint(oracle::random_stiefel(n, k, rng));
}

}  // namespace

TEST_CASE("problem construction validates its assumptions") {
  const Matrix i3 = Matrix::Identity(3, 3);
  CHECK_THROWS_AS((TraceRatioProblem{SymmetricMatrix{i3}, SymmetricMatrix{-i3},
                                      Matrix::Zero(3, 1), 0.5}),
                  InvariantError);  // B not PSD
  Matrix low_rank = Matrix::Zero(3, 3);
  low_rank(0, 0) = 1.0;
  CHECK_THROWS_AS((TraceRatioProblem{SymmetricMatrix{i3},
                                      SymmetricMatrix{low_rank},
                                      Matrix::Zero(3, 2), 0.5}),
                  InvariantError);  // rank(B) <= n - k
  CHECK_THROWS_AS((TraceRatioProblem{SymmetricMatrix{i3}, SymmetricMatrix{i3},
                                      Matrix::Zero(3, 1), -0.1}),
                  InvariantError);
  CHECK_THROWS_AS((TraceRatioProblem{SymmetricMatrix{i3}, SymmetricMatrix{i3},
                                      Matrix::Zero(3, 1), 1.1}),
                  InvariantError);
  CHECK_THROWS_AS((TraceRatioProblem{SymmetricMatrix{i3}, SymmetricMatrix{i3},
                                      Matrix::Zero(3, 3), 0.5}),
                  DimensionError);  // k = n
}

TEST_CASE("evaluate on identity data") {
  const Matrix i3 = Matrix::Identity(3, 3);
  const TraceRatioProblem p{SymmetricMatrix{i3}, SymmetricMatrix{i3},
                            Matrix::Zero(3, 2), 1.0};
  const ObjectiveBreakdown ob = evaluate(p, random_point(3, 2, 1));
  CHECK(ob.f_theta == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ob.numerator == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ob.denominator == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("evaluate the pure linear term") {
  const Matrix i3 = Matrix::Identity(3, 3);
  Matrix d = Matrix::Zero(3, 1);
  d(0, 0) = 1.0;
  const TraceRatioProblem p{SymmetricMatrix{Matrix::Zero(3, 3)},
                            SymmetricMatrix{i3}, d, 0.0};
  const StiefelPoint e1 = StiefelPoint::coordinate_basis(3, 1);
  const ObjectiveBreakdown ob = evaluate(p, e1);
  CHECK(ob.f_theta == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ob.g_theta == doctest::Approx(0.0));
  CHECK(ob.h_theta == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("evaluate matches the scalar-loop oracle") {
  const TraceRatioProblem p = random_problem(4, 2, 0.7, 5);
  const StiefelPoint x = StiefelPoint::coordinate_basis(4, 2);
  const double ref = oracle::objective(p.a().matrix(), p.b().matrix(), p.d(),
                                       p.theta(), x.matrix());
  const ObjectiveBreakdown ob = evaluate(p, x);
  CHECK(ob.f_theta == doctest::Approx(ref).epsilon(1e-13));
  CHECK(ob.f_theta ==
        doctest::Approx(ob.g_theta + ob.h_theta).epsilon(1e-12));
}

TEST_CASE("evaluate raises the denominator guard on a vanishing trace") {
  Matrix b = Matrix::Zero(3, 3);
  b(0, 0) = 1e-5;
  b(1, 1) = 1.2e-15;
  b(2, 2) = 1.2e-15;
  const TraceRatioProblem p{SymmetricMatrix{Matrix::Identity(3, 3)},
                            SymmetricMatrix{b}, Matrix::Zero(3, 1), 0.0};
  Matrix e2 = Matrix::Zero(3, 1);
  e2(1, 0) = 1.0;
  CHECK_THROWS_AS(evaluate(p, StiefelPoint(e2)), NumericError);
}

TEST_CASE("build_E collapses for D = 0") {
  const TraceRatioProblem p0 = random_problem(4, 2, 0.0, 6, /*zero_d=*/true);
  const StiefelPoint x = random_point(4, 2, 7);
  CHECK((build_E(p0, x).matrix() - 2.0 * p0.a().matrix()).norm() < 1e-13);

  const TraceRatioProblem p1 = random_problem(4, 2, 1.0, 6, /*zero_d=*/true);
  const ObjectiveBreakdown ob = evaluate(p1, x);
  const double f1 = ob.numerator / ob.denominator;
  const Matrix expected =
      2.0 / ob.denominator * (p1.a().matrix() - f1 * p1.b().matrix());
  CHECK((build_E(p1, x).matrix() - expected).norm() <
        1e-12 * expected.norm());
}

TEST_CASE("build_E is exactly symmetric and matches the element oracle") {
  const TraceRatioProblem p = random_problem(5, 2, 0.6, 8);
  const StiefelPoint x = random_point(5, 2, 9);
  const SymmetricMatrix e = build_E(p, x);
  CHECK((e.matrix() - e.matrix().transpose()).norm() == 0.0);
  const Matrix ref = oracle::nepv_matrix(p.a().matrix(), p.b().matrix(),
                                         p.d(), p.theta(), x.matrix());
  CHECK((e.matrix() - ref).norm() < 1e-12 * std::max(1.0, ref.norm()));
}

TEST_CASE("nepv_residual vanishes at an exact eigenbasis") {
  const TraceRatioProblem p = random_problem(5, 2, 0.0, 10, /*zero_d=*/true);
  const SpectrumSlice top = sym_eig_topk(p.a(), 2);
  CHECK(nepv_residual(p, top.basis) <= 1e-14);
}

TEST_CASE("nepv_residual reproduces the 2x2 hand value") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const TraceRatioProblem p{SymmetricMatrix{a},
                            SymmetricMatrix{Matrix::Identity(2, 2)},
                            Matrix::Zero(2, 1), 0.0};
  Matrix xm(2, 1);
  xm << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const StiefelPoint x(xm);
  // E = 2A; ||E x - x (x^T E x)||_F = 1; denominator ||A||_2 = 2; k = 1:
  // residual = (1/2) * (1/2) = 1/4
  CHECK(nepv_residual(p, x) == doctest::Approx(0.25).epsilon(1e-13));

  // independent elementwise recomputation of the same formula
  const Matrix e = oracle::nepv_matrix(a, Matrix::Identity(2, 2),
                                       Matrix::Zero(2, 1), 0.0, xm);
  const Matrix r = e * xm - xm * (xm.transpose() * e * xm);
  CHECK(nepv_residual(p, x) ==
        doctest::Approx(r.norm() / (2.0 * 2.0)).epsilon(1e-13));
}

TEST_CASE("one-norm residual mode uses one-norms in the denominator") {
  const TraceRatioProblem p = random_problem(5, 2, 0.5, 11);
  const StiefelPoint x = random_point(5, 2, 12);
  const double spec = nepv_residual(p, x, ResidualNormMode::Spectral);
  const double one = nepv_residual(p, x, ResidualNormMode::OneNorm);
  CHECK(spec > 0.0);
  CHECK(one > 0.0);
  // one-norms dominate spectral norms, so the normalized value shrinks
  CHECK(one <= spec * (1.0 + 1e-12));
}

TEST_CASE("certify at a known critical point and at a random point") {
  const TraceRatioProblem p = random_problem(5, 2, 0.0, 13, /*zero_d=*/true);
  const SpectrumSlice top = sym_eig_topk(p.a(), 2);
  const Certificate at_opt = certify(p, top.basis);
  CHECK(at_opt.nepv_residual <= 1e-12);
  CHECK(at_opt.xtd_symmetry_defect <= 1e-12);
  CHECK(at_opt.xtd_min_eigenvalue >= -1e-12);
  CHECK(std::abs(at_opt.topk_defect) <= 1e-12);
  CHECK(at_opt.eigen_gap >= 0.0);

  const Certificate off = certify(p, random_point(5, 2, 14));
  CHECK(off.nepv_residual > 1e-3);  // negative control
}

TEST_CASE("rotation covariance of the objective when D = 0") {
  const TraceRatioProblem p = random_problem(6, 3, 0.8, 15, /*zero_d=*/true);
  const StiefelPoint x = random_point(6, 3, 16);
  const double f = evaluate(p, x).f_theta;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    StreamRng rng(seed, 103);
    const Matrix q = oracle::random_orthogonal(3, rng);
    const double fq = evaluate(p, StiefelPoint(x.matrix() * q)).f_theta;
    REQUIRE(fq == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("adding a numerator constant equals shifting A by (c/k) I") {
  const TraceRatioProblem p = random_problem(5, 2, 0.4, 17);
  const double c = 2.75;
  Matrix a_shift = p.a().matrix();
  a_shift.diagonal().array() += c / 2.0;
  const TraceRatioProblem shifted(sym(a_shift), p.b(), p.d(), p.theta());
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const StiefelPoint x = random_point(5, 2, 200 + seed);
    const ObjectiveBreakdown base = evaluate(p, x);
    const ObjectiveBreakdown sh = evaluate(shifted, x);
    const double expected =
        (base.numerator + c) / std::pow(base.denominator, p.theta());
    REQUIRE(sh.f_theta == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("gamma vanishes exactly for theta 0 and 1") {
  for (double theta : {0.0, 1.0}) {
    const TraceRatioProblem p = random_problem(5, 2, theta, 18);
    const LemmaMonoQuantities q = lemma_mono_quantities(
        p, random_point(5, 2, 19), random_point(5, 2, 20));
    REQUIRE(q.gamma == 0.0);
  }
}

TEST_CASE("monotonicity estimate holds on 1000 filtered pairs") {
  const double thetas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  int accepted = 0;
  std::uint64_t seed = 0;
  while (accepted < 1000) {
    ++seed;
    const double theta = thetas[seed % 5];
    const TraceRatioProblem p = random_problem(6, 2, theta, seed);
    const StiefelPoint x = random_point(6, 2, 3 * seed + 1);
    const StiefelPoint xt = random_point(6, 2, 3 * seed + 2);
    const SymmetricMatrix e = build_E(p, x);
    const double trace_x =
        (e.matrix() * x.matrix()).cwiseProduct(x.matrix()).sum();
    const double trace_xt =
        (e.matrix() * xt.matrix()).cwiseProduct(xt.matrix()).sum();
    if (trace_xt < trace_x) continue;  // hypothesis (trace inequality) fails
    ++accepted;

    const LemmaMonoQuantities q = lemma_mono_quantities(p, x, xt);
    const double lhs = evaluate(p, x).f_theta + q.gamma;
    const double cross = (xt.matrix().transpose() * p.d() *
                          x.matrix().transpose() * xt.matrix())
                             .trace();
    const double rhs = evaluate(p, xt).g_theta +
                       cross / std::pow(q.beta_tilde, theta);
    REQUIRE(lhs <= rhs + 1e-10 * std::max(1.0, std::abs(rhs)));
    if (q.alpha + q.delta >= 0) {
      REQUIRE(q.gamma >= -1e-15);
    }
    if (trace_xt > trace_x + 1e-6) {
      REQUIRE(lhs < rhs);  // strict when the trace inequality is strict
    }
  }
}

TEST_CASE("trace equality with the trace norm forces symmetry and PSD") {
  // Lemma: |tr(H)| = ||H||_tr forces H symmetric and semidefinite. Construct
  // H = V S V^T with S >= 0 (equality holds), plus a negative control.
  StreamRng rng(23, 104);
  const Matrix v = oracle::random_orthogonal(3, rng);
  Vector s(3);
  s << 2.0, 1.0, 0.5;
  const Matrix h = v * s.asDiagonal() * v.transpose();
  CHECK(std::abs(std::abs(h.trace()) - trace_norm(h)) < 1e-10);
  CHECK((h - h.transpose()).norm() < 1e-8);
  CHECK(oracle::jacobi_eig(0.5 * (h + h.transpose())).values.minCoeff() >=
        -1e-12);

  const Matrix g = rng.normal_matrix(3, 3);  // generic: strict inequality
  CHECK(std::abs(g.trace()) < trace_norm(g) - 1e-6);
}
