#include "doctest.h"

#include "dynsamp/error.hpp"
#include "dynsamp/presets.hpp"
#include "dynsamp/recover.hpp"
#include "oracles.hpp"

using namespace dynsamp;

TEST_CASE("identity block gives the right-hand side") {
  oracle::Rng rng(1);
  const Vector b = rng.normal_vector(6);
  RealStreamingLsq lsq(6);
  CHECK_FALSE(lsq.full_rank());
  lsq.update(Matrix::Identity(6, 6), b);
  CHECK(lsq.full_rank());
  CHECK((lsq.solve() - b).norm() <= 1e-15 * b.norm());
  CHECK(lsq.rows_seen() == 6);

  std::vector<std::pair<Matrix, Vector>> blocks{{Matrix::Identity(6, 6), b}};
  CHECK((batch_lsq(blocks) - b).norm() <= 1e-15 * b.norm());
  blocks[0].second.setZero();
  CHECK(batch_lsq(blocks).norm() == 0.0);
}

TEST_CASE("streaming matches the pseudoinverse on random blocks") {
  oracle::Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = rng.integer(1, 12);
    RealStreamingLsq lsq(d);
    std::vector<std::pair<Matrix, Vector>> blocks;
    const Index state = lsq.state_size();
    const int count = static_cast<int>(rng.integer(1, 6));
    for (int i = 0; i < count || !lsq.full_rank(); ++i) {
      const Matrix a = rng.normal_matrix(rng.integer(1, d + 2), d);
      const Vector b = rng.normal_vector(a.rows());
      lsq.update(a, b);
      blocks.emplace_back(a, b);
      CHECK(lsq.state_size() == state);
    }
    Index rows = 0;
    for (const auto& blk : blocks) rows += blk.first.rows();
    Matrix stack(rows, d);
    Vector rhs(rows);
    Index at = 0;
    for (const auto& [a, b] : blocks) {
      stack.middleRows(at, a.rows()) = a;
      rhs.segment(at, a.rows()) = b;
      at += a.rows();
    }
    const Vector ref = oracle::pinv_solve(stack, rhs);
    CHECK((lsq.solve() - ref).norm() <= 1e-9 * ref.norm());
    CHECK((batch_lsq(blocks) - ref).norm() <= 1e-9 * ref.norm());
    // Accumulated residual matches the explicit one.
    CHECK(lsq.residual_norm_sq() == doctest::Approx((stack * ref - rhs).squaredNorm()).epsilon(1e-8));
  }
}

TEST_CASE("complex streaming") {
  oracle::Rng rng(3);
  const Index d = 5;
  ComplexStreamingLsq lsq(d);
  CMatrix stack(0, d);
  CVector rhs(0);
  for (int i = 0; i < 4; ++i) {
    CMatrix a(3, d);
    for (Index r = 0; r < 3; ++r) a.row(r) = rng.complex_vector(d).transpose();
    const CVector b = rng.complex_vector(3);
    lsq.update(a, b);
    CMatrix s2(stack.rows() + 3, d);
    s2 << stack, a;
    stack = s2;
    CVector r2(rhs.size() + 3);
    r2 << rhs, b;
    rhs = r2;
  }
  const CVector ref = oracle::pinv_solve(stack, rhs);
  CHECK((lsq.solve() - ref).norm() <= 1e-10 * ref.norm());
}

TEST_CASE("rank-deficient state reports undetermined columns") {
  RealStreamingLsq lsq(4);
  Matrix a = Matrix::Zero(2, 4);
  a(0, 0) = 1.0;
  a(1, 1) = 1.0;
  lsq.update(a, Vector::Ones(2));
  CHECK(lsq.deficient_columns() == 2);
  try {
    (void)lsq.solve();
    FAIL("expected a NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("2 of 4") != std::string::npos);
  }
  CHECK_THROWS_AS(lsq.update(Matrix::Zero(2, 3), Vector::Zero(2)), ValidationError);
  CHECK_THROWS_AS(lsq.update(Matrix::Zero(2, 4), Vector::Zero(3)), ValidationError);

  std::vector<std::pair<Matrix, Vector>> blocks{{a, Vector::Ones(2)}};
  CHECK_THROWS_AS(batch_lsq(blocks), NumericalError);
}

TEST_CASE("dynamical sampling solver on the scattered d = 18 setup") {
  const EvolutionOperator op = EvolutionOperator::circulant(presets::five_tap_filter(18));
  const SamplingPattern omega = presets::scattered_pattern_18();
  const Signal f = presets::random_signal(18, 2.2914, 4);
  const MeasurementSeries y = sample_series(evolve(op, f, 18), omega);
  const Signal est = recover_signal(op, y);
  CHECK((est - f).norm() / f.norm() <= 1e-8);

  // Same answer as the explicit stack.
  const Matrix stack = oracle::explicit_stack(op.to_dense(), omega.indices(), 19);
  Vector rhs(stack.rows());
  for (Index i = 0; i < 19; ++i) rhs.segment(i * 7, 7) = y.values.col(i);
  CHECK((est - oracle::pinv_solve(stack, rhs)).norm() <= 1e-8 * f.norm());

  DynamicalSamplingSolver solver(op, omega);
  solver.absorb(y.values.col(0));
  CHECK_FALSE(solver.full_rank());
  CHECK_THROWS_AS(solver.absorb(Vector::Zero(6)), ValidationError);
}

TEST_CASE("apply_threshold") {
  Vector x(2);
  x << 0.01, 1.0;
  const Vector t = apply_threshold(x, 2.3714e-2);
  CHECK(t(0) == 0.0);
  CHECK(t(1) == 1.0);
  CHECK(apply_threshold(t, 2.3714e-2) == t);

  Vector z(3);
  z << 0.0, -3.0, 1e-300;
  CHECK(apply_threshold(z, 0.0) == z);
  CHECK_THROWS_AS(apply_threshold(z, -1.0), ValidationError);
}
