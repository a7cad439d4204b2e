#include "doctest.h"

#include "dynsamp/core.hpp"
#include "dynsamp/error.hpp"
#include "dynsamp/presets.hpp"
#include "oracles.hpp"

using namespace dynsamp;

TEST_CASE("dft of an impulse and a constant") {
  CVector impulse = CVector::Zero(4);
  impulse(0) = 1.0;
  const CVector a = dft(impulse);
  for (Index k = 0; k < 4; ++k) CHECK(std::abs(a(k) - Complex(1.0)) < 1e-15);

  const CVector b = dft(CVector(CVector::Ones(4)));
  CHECK(std::abs(b(0) - Complex(4.0)) < 1e-15);
  for (Index k = 1; k < 4; ++k) CHECK(std::abs(b(k)) < 1e-15);
}

TEST_CASE("dft of the five-tap filter at frequency zero") {
  const Vector taps = presets::five_tap_filter(18).taps();
  const double direct = taps.sum();  // zero frequency is the plain sum
  CHECK(direct == doctest::Approx(2.25));
  CHECK(std::abs(dft(taps)(0) - Complex(direct)) < 1e-13);
}

TEST_CASE("dft matches direct summation for lengths with odd factors") {
  oracle::Rng rng(11);
  for (Index n : {1, 2, 3, 5, 7, 15, 18, 45, 101}) {
    const CVector x = rng.complex_vector(n);
    const CVector fast = dft(x);
    const CVector slow = oracle::direct_dft(x);
    CHECK((fast - slow).norm() <= 1e-12 * slow.norm());
    const CVector back = dft(x, Direction::inverse);
    CHECK((back - oracle::direct_dft(x, true)).norm() <= 1e-12 * x.norm());
  }
  CHECK_THROWS_AS(dft(CVector()), ValidationError);
}

TEST_CASE("circular convolution") {
  Vector a(3), f(3), expected(3);
  a << 1, 1, 0;
  f << 1, 2, 3;
  expected << 4, 3, 5;
  CHECK((circular_convolve(a, f) - expected).norm() < 1e-14);
  CHECK((oracle::direct_convolve(a, f) - expected).norm() < 1e-14);

  Vector impulse = Vector::Zero(3);
  impulse(0) = 1.0;
  CHECK((circular_convolve(impulse, f) - f).norm() < 1e-15);
  CHECK_THROWS_AS(circular_convolve(a, Vector(Vector::Ones(4))), ValidationError);
}

TEST_CASE("five-tap circulant applied to an impulse returns the taps") {
  const EvolutionOperator op = EvolutionOperator::circulant(presets::five_tap_filter(18));
  Vector e0 = Vector::Zero(18);
  e0(0) = 1.0;
  const Vector col = op.apply(e0);
  Vector expected = Vector::Zero(18);
  expected(0) = 1.0;
  expected(1) = expected(17) = 0.5;
  expected(2) = expected(16) = 0.125;
  CHECK((col - expected).norm() < 1e-14);
  // The circulant's first row is the same sequence read as a row.
  const Matrix dense = op.to_dense();
  CHECK((Vector(dense.row(0).transpose()) - expected).norm() < 1e-14);
}

TEST_CASE("convolution theorem and symmetric filter spectra") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = rng.integer(2, 40);
    const Vector a = rng.normal_vector(d);
    const Vector f = rng.normal_vector(d);
    const CVector lhs = dft(oracle::direct_convolve(a, f));
    const CVector rhs = dft(a).cwiseProduct(dft(f));
    CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));

    const Index h = d / 2;
    std::vector<double> half(h + 1);
    for (double& x : half) x = rng.normal();
    const RealSymmetricFilter filt = RealSymmetricFilter::from_half_taps(half, d);
    const CVector spec = dft(filt.taps());
    CHECK(spec.imag().norm() <= 1e-10 * std::max(1.0, spec.norm()));
    for (Index k = 1; k < d; ++k) CHECK(std::abs(spec(k) - spec(d - k)) <= 1e-10 * std::max(1.0, spec.norm()));
  }
}

TEST_CASE("filter construction") {
  Vector asym(4);
  asym << 1, 2, 0, 0;
  CHECK_THROWS_AS(RealSymmetricFilter{asym}, ValidationError);

  const std::vector<double> folded{1.0, 0.5, 0.25};
  const RealSymmetricFilter f = RealSymmetricFilter::from_folded_spectrum(folded, 5);
  const Vector spec = f.spectrum();
  CHECK(spec(0) == doctest::Approx(1.0));
  CHECK(spec(1) == doctest::Approx(0.5));
  CHECK(spec(4) == doctest::Approx(0.5));
  CHECK(spec(2) == doctest::Approx(0.25));
  CHECK((f.taps() - oracle::taps_from_folded(folded, 5)).norm() < 1e-14);
}

TEST_CASE("evolution operator variants agree") {
  oracle::Rng rng(9);
  const RealSymmetricFilter filt = presets::staircase_filter(15);
  const EvolutionOperator circ = EvolutionOperator::circulant(filt);
  const EvolutionOperator dense = EvolutionOperator::dense(oracle::circulant_matrix(filt.taps()));
  const Vector f = rng.normal_vector(15);
  CHECK((circ.apply(f) - dense.apply(f)).norm() < 1e-13);
  CHECK((circ.apply_adjoint(f) - dense.apply_adjoint(f)).norm() < 1e-13);
  const Matrix rows = rng.normal_matrix(4, 15);
  CHECK((circ.apply_to_rows(rows) - rows * dense.to_dense()).norm() < 1e-12);
  CHECK(circ.filter() != nullptr);
  CHECK(dense.filter() == nullptr);
}

TEST_CASE("sampling patterns") {
  const SamplingPattern u = SamplingPattern::uniform(15, 3);
  CHECK(u.indices() == std::vector<Index>{0, 3, 6, 9, 12});
  CHECK(u.one_based() == std::vector<Index>{1, 4, 7, 10, 13});
  CHECK(u.uniform_step() == 3);
  CHECK(SamplingPattern::from_one_based(15, {1, 4, 7, 10, 13}) == u);

  const SamplingPattern ext = u.merged(SamplingPattern::from_one_based(15, {3, 15}));
  CHECK(ext.indices() == std::vector<Index>{0, 2, 3, 6, 9, 12, 14});
  CHECK_FALSE(ext.uniform_step().has_value());

  const SamplingPattern p18 = presets::scattered_pattern_18();
  CHECK(p18.indices() == std::vector<Index>{0, 4, 6, 9, 12, 14, 17});

  CHECK_THROWS_AS(SamplingPattern(5, {0, 0}), ValidationError);
  CHECK_THROWS_AS(SamplingPattern(5, {5}), ValidationError);
  CHECK_THROWS_AS(SamplingPattern::from_one_based(5, {0}), ValidationError);
}

TEST_CASE("subsample") {
  oracle::Rng rng(3);
  const Vector x = rng.normal_vector(15);
  CHECK(subsample(x, SamplingPattern::uniform(15, 1)) == x);
  const Vector s = subsample(x, SamplingPattern::uniform(15, 3));
  REQUIRE(s.size() == 5);
  for (Index i = 0; i < 5; ++i) CHECK(s(i) == x(3 * i));

  // Linearity holds exactly: subsampling only copies entries.
  const Vector y = rng.normal_vector(15);
  const SamplingPattern p = SamplingPattern::from_one_based(15, {2, 5, 11});
  CHECK(subsample(Vector(2.5 * x - 0.75 * y), p) == Vector(2.5 * subsample(x, p) - 0.75 * subsample(y, p)));
}

TEST_CASE("Poisson summation for uniform subsampling") {
  oracle::Rng rng(21);
  const Vector z = rng.normal_vector(15);
  const CVector zh = oracle::direct_dft(z.cast<Complex>());
  const CVector lhs = dft(subsample(z, SamplingPattern::uniform(15, 3)));
  for (Index j = 0; j < 5; ++j) {
    const Complex rhs = (zh(j) + zh(j + 5) + zh(j + 10)) / 3.0;
    CHECK(std::abs(lhs(j) - rhs) < 1e-10);
  }
}

TEST_CASE("recoverability") {
  oracle::Rng rng(2);
  const EvolutionOperator dense = EvolutionOperator::dense(rng.normal_matrix(6, 6));
  const Recoverability all = check_recoverability(dense, SamplingPattern::all(6));
  CHECK(all.recoverable);
  CHECK(all.min_levels == 0);

  const Recoverability none = check_recoverability(dense, SamplingPattern(6, {}));
  CHECK_FALSE(none.recoverable);
  CHECK_FALSE(none.min_levels.has_value());

  const EvolutionOperator stair = EvolutionOperator::circulant(presets::staircase_filter(15));
  CHECK_FALSE(check_recoverability(stair, SamplingPattern::uniform(15, 3)).recoverable);
  const SamplingPattern ext =
      SamplingPattern::uniform(15, 3).merged(SamplingPattern::from_one_based(15, {3, 15}));
  const Recoverability r = check_recoverability(stair, ext);
  CHECK(r.recoverable);
  REQUIRE(r.min_levels.has_value());
  // Oracle: the explicit stack through min_levels has full rank, one level less does not.
  const Matrix a = stair.to_dense();
  CHECK(numerical_rank(oracle::explicit_stack(a, ext.indices(), *r.min_levels + 1)) == 15);
  CHECK(numerical_rank(oracle::explicit_stack(a, ext.indices(), *r.min_levels)) < 15);

  // Scaling the filter does not change the answer.
  const EvolutionOperator scaled =
      EvolutionOperator::circulant(RealSymmetricFilter(Vector(3.7 * presets::staircase_filter(15).taps())));
  CHECK(check_recoverability(scaled, ext).recoverable);
  CHECK_FALSE(check_recoverability(scaled, SamplingPattern::uniform(15, 3)).recoverable);
  CHECK_THROWS_AS(check_recoverability(stair, SamplingPattern::all(14)), ValidationError);
}
