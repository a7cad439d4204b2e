#include "doctest.h"

#include "dynsamp/error.hpp"
#include "dynsamp/presets.hpp"
#include "dynsamp/simulate.hpp"
#include "oracles.hpp"

using namespace dynsamp;

TEST_CASE("evolve") {
  oracle::Rng rng(1);
  const Signal f = rng.normal_vector(15);
  const std::vector<double> one{1.0};
  const EvolutionOperator id = EvolutionOperator::circulant(RealSymmetricFilter::from_half_taps(one, 15));
  const Matrix traj = evolve(id, f, 4);
  REQUIRE(traj.cols() == 5);
  for (Index c = 0; c < 5; ++c) CHECK((traj.col(c) - f).norm() < 1e-14);
  CHECK(evolve(id, f, 0).cols() == 1);

  const EvolutionOperator op = EvolutionOperator::circulant(presets::staircase_filter(15));
  const Matrix pi = evolve(op, presets::reference_signal_15(), 100);
  CHECK(pi.rows() == 15);
  CHECK(pi.cols() == 101);

  // Semigroup: starting one step later shifts the columns.
  const Matrix later = evolve(op, op.apply(f), 9);
  const Matrix full = evolve(op, f, 10);
  CHECK(later == full.rightCols(10));
  CHECK_THROWS_AS(evolve(op, f, -1), ValidationError);
}

TEST_CASE("add_noise") {
  oracle::Rng rng(2);
  const Matrix x = rng.normal_matrix(5, 7);
  CHECK(add_noise(x, {0.0, 1}) == x);
  CHECK(add_noise(x, {0.1, 42}) == add_noise(x, {0.1, 42}));
  CHECK(add_noise(x, {0.1, 42}) != add_noise(x, {0.1, 43}));
  CHECK_THROWS_AS(add_noise(x, {-1.0, 0}), ValidationError);
}

TEST_CASE("noise statistics over a million draws") {
  const double sigma = 0.3;
  const Matrix z = add_noise(Matrix::Zero(1000, 1000), {sigma, 7});
  const double mean = z.mean();
  const double var = (z.array() - mean).square().sum() / double(z.size() - 1);
  CHECK(std::abs(mean) <= 4.0 * sigma / 1000.0);
  CHECK(std::abs(var - sigma * sigma) <= 0.01 * sigma * sigma);
}

TEST_CASE("sample_series") {
  oracle::Rng rng(3);
  const Matrix traj = rng.normal_matrix(15, 6);
  const SamplingPattern p = SamplingPattern::uniform(15, 3);
  const MeasurementSeries s = sample_series(traj, p, SeriesKind::noisy);
  CHECK(s.levels() == 6);
  CHECK(s.kind == SeriesKind::noisy);
  for (Index c = 0; c < 6; ++c) CHECK(s.values.col(c) == subsample(Vector(traj.col(c)), p));
  CHECK_THROWS_AS(MeasurementSeries(Matrix(4, 3), p), ValidationError);
  CHECK_THROWS_AS(MeasurementSeries(Matrix(5, 0), p), ValidationError);
}

TEST_CASE("block_aggregate") {
  oracle::Rng rng(4);
  const Matrix x = rng.normal_matrix(15, 23);
  CHECK(block_aggregate(x, 1, BlockMode::sum) == x);

  const Matrix sums = block_aggregate(x, 10, BlockMode::sum);
  REQUIRE(sums.cols() == 2);  // the last 3 columns form a partial block
  Vector gamma1 = Vector::Zero(15);
  for (Index c = 0; c < 10; ++c) gamma1 += x.col(c);
  CHECK((sums.col(0) - gamma1).norm() < 1e-13);

  Matrix same(3, 8);
  for (Index c = 0; c < 8; ++c) same.col(c) << 1.0, -2.0, 0.5;
  const Matrix means = block_aggregate(same, 4, BlockMode::mean);
  for (Index c = 0; c < means.cols(); ++c) CHECK((means.col(c) - same.col(0)).norm() < 1e-15);

  const Matrix y = rng.normal_matrix(15, 23);
  CHECK((block_aggregate(Matrix(2.0 * x + y), 5) - (2.0 * block_aggregate(x, 5) + block_aggregate(y, 5))).norm() <
        1e-13);

  CHECK_THROWS_AS(block_aggregate(x, 0), ValidationError);
  CHECK_THROWS_AS(block_aggregate(x, 24), ValidationError);
}

TEST_CASE("derived seeds differ per stream") {
  CHECK(derive_seed(0, 0) != derive_seed(0, 1));
  CHECK(derive_seed(0, 0) != derive_seed(1, 0));
  CHECK(derive_seed(5, 9) == derive_seed(5, 9));
}
