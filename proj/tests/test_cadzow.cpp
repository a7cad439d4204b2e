#include "doctest.h"

#include "dynsamp/cadzow.hpp"
#include "dynsamp/error.hpp"
#include "dynsamp/presets.hpp"
#include "dynsamp/spectrum.hpp"
#include "oracles.hpp"

using namespace dynsamp;

namespace {

bool is_hankel(const CMatrix& h) {
  for (Index p = 0; p < h.rows(); ++p)
    for (Index q = 0; q < h.cols(); ++q)
      if (p + 1 < h.rows() && q > 0 && h(p + 1, q - 1) != h(p, q)) return false;
  return true;
}

CVector geometric(Complex c, Complex z, Index n) {
  CVector s(n);
  for (Index l = 0; l < n; ++l) s(l) = c * std::pow(z, double(l));
  return s;
}

MeasurementSeries staircase_series(Index levels) {
  const EvolutionOperator op = EvolutionOperator::circulant(presets::staircase_filter(15));
  return sample_series(evolve(op, presets::reference_signal_15(), levels), SamplingPattern::uniform(15, 3));
}

}  // namespace

TEST_CASE("Hankel round trip") {
  oracle::Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.integer(1, 12);
    const CVector seq = rng.complex_vector(2 * n - 1);
    const CMatrix h = hankel_from_sequence(seq);
    CHECK(h.rows() == n);
    CHECK(is_hankel(h));
    CHECK((antidiagonal_average(h) - seq).norm() <= 1e-15 * seq.norm());
  }
  CHECK_THROWS_AS(hankel_from_sequence(CVector(4)), ValidationError);
}

TEST_CASE("projection output is exactly Hankel") {
  oracle::Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.integer(2, 10);
    CMatrix x(n, n);
    for (Index c = 0; c < n; ++c) x.col(c) = rng.complex_vector(n);
    const HankelMatrix h = cadzow_project(x, rng.integer(1, n), 3);
    CHECK(h.bin == 3);
    CHECK(is_hankel(h.entries));
  }
  CHECK_THROWS_AS(cadzow_project(CMatrix::Identity(3, 3), 0), ValidationError);
  CHECK_THROWS_AS(cadzow_project(CMatrix(3, 2), 1), ValidationError);
}

TEST_CASE("low-rank Hankel input is a fixed point") {
  const CVector seq = geometric(Complex(1.0, 0.5), 0.8, 9) + geometric(-0.3, Complex(0.2, 0.6), 9);
  const CMatrix h = hankel_from_sequence(seq);
  CHECK((cadzow_project(h, 2).entries - h).norm() <= 1e-12 * h.norm());
  CHECK((cadzow_project(h, 3).entries - h).norm() <= 1e-12 * h.norm());
  CHECK(rank_ratio(h, 2) <= 1e-12);
  CHECK(rank_ratio(h, 1) > 1e-3);
  CHECK(rank_ratio(h, 5) == 0.0);
}

TEST_CASE("one step moves a perturbed rank-one Hankel matrix closer") {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.integer(3, 12);
    const Complex z = std::polar(rng.uniform(0.3, 1.0), rng.uniform(-3.0, 3.0));
    const CMatrix clean = hankel_from_sequence(geometric(Complex(rng.normal(), rng.normal()), z, 2 * n - 1));
    CMatrix e(n, n);
    for (Index c = 0; c < n; ++c) e.col(c) = rng.complex_vector(n);
    e *= 1e-3 * clean.norm() / e.norm();
    const CMatrix noisy = clean + e;
    const double before = (noisy - clean).norm();
    const double after = (cadzow_project(noisy, 1).entries - clean).norm();
    CHECK(after < before);
  }
}

TEST_CASE("noiseless staircase data pass through unchanged") {
  const MeasurementSeries y = staircase_series(100);
  const DenoiseResult r = denoise_series(y, 3);
  CHECK(r.series.kind == SeriesKind::denoised);
  CHECK(r.series.values.cols() == 101);
  CHECK((r.series.values - y.values).norm() <= 1e-8 * y.values.norm());
  REQUIRE(r.ranks.size() == 5);
  CHECK(r.ranks[0] == 2);
  for (Index j = 1; j < 5; ++j) CHECK(r.ranks[j] == 3);
  for (double ratio : r.rank_ratios) CHECK(ratio <= 1e-8);
  CHECK(r.warnings.empty());
}

TEST_CASE("odd L drops the last level with a warning") {
  const DenoiseResult r = denoise_series(staircase_series(11), 3);
  CHECK(r.series.values.cols() == 11);
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("denoising is real, homogeneous and certifies its rank") {
  const MeasurementSeries clean = staircase_series(40);
  const Matrix noisy = add_noise(clean.values, {1e-3, 17});
  const MeasurementSeries y(noisy, clean.pattern, SeriesKind::noisy);
  DenoiseOptions opts;
  opts.k_max = 200;
  opts.early_exit_tol = 1e-14;
  const DenoiseResult r = denoise_series(y, 3, opts);
  CHECK(r.series.values.allFinite());
  for (Index j = 0; j < 5; ++j) CHECK(r.rank_ratios[j] == r.rank_ratios[(5 - j) % 5]);
  // Denoised output sits closer to the clean data than the input does.
  CHECK((r.series.values - clean.values).norm() < (noisy - clean.values).norm());

  const MeasurementSeries scaled(Matrix(-3.5 * noisy), clean.pattern);
  const DenoiseResult rs = denoise_series(scaled, 3, opts);
  CHECK((rs.series.values + 3.5 * r.series.values).norm() <= 1e-9 * rs.series.values.norm());

  DenoiseOptions bad;
  bad.k_max = 0;
  CHECK_THROWS_AS(denoise_series(y, 3, bad), ValidationError);
  bad.k_max = 5;
  bad.rank = 0;
  CHECK_THROWS_AS(denoise_series(y, 3, bad), ValidationError);
  CHECK_THROWS_AS(denoise_series(y, 5, {}), ValidationError);
}

TEST_CASE("a rank override applies to every bin") {
  DenoiseOptions opts;
  opts.rank = 7;
  const DenoiseResult r = denoise_series(staircase_series(40), 3, opts);
  for (Index rank : r.ranks) CHECK(rank == 7);
}
