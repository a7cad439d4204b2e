#pragma once

#include <vector>

#include "dynsamp/core.hpp"
#include "dynsamp/simulate.hpp"

namespace dynsamp {

/// J x (L+1) matrix whose entry (j, l) is the J-point forward DFT of the
/// uniformly subsampled time level l, evaluated at bin j. By Poisson
/// summation each bin mixes the m spectral values at j, j+J, ..., j+(m-1)J.
struct BinSpectra {
  CMatrix values;
  Index step = 1;  // m
  Index bins = 1;  // J = d / m
};

/// Requires a uniform pattern with step m, m odd and d/m odd.
BinSpectra bin_spectra(const MeasurementSeries& y, Index m);

/// Monic p(x) = x^r + c_{r-1} x^{r-1} + ... + c_0 whose recurrence
///   s(k + r) + sum_l c_l s(k + l) = 0
/// annihilates a bin sequence s.
struct AnnihilatorPolynomial {
  CVector coefficients;  // c_0 .. c_{r-1}
  Index bin = 0;
  double residual = 0.0;  // least-squares misfit of the recurrence

  Index degree() const { return coefficients.size(); }
};

struct AnnihilatorMode {
  enum class Kind { fixed, automatic };
  Kind kind = Kind::automatic;
  Index degree = 0;    // fixed mode
  double tol = 1e-6;   // automatic mode, relative to ||seq||

  static AnnihilatorMode fixed(Index r) { return {Kind::fixed, r, 0.0}; }
  static AnnihilatorMode automatic(double tol = 1e-6) { return {Kind::automatic, 0, tol}; }
};

/// Field of the unknown coefficients. A real spectrum has real annihilators,
/// and solving over the reals keeps simple real roots real under noise.
enum class CoefficientField { complex, real };

/// Fixed mode solves the Hankel system of degree r by least squares and
/// needs at least 2r samples. Automatic mode returns the smallest r whose
/// residual is at most tol * ||seq||, testing r while the system stays
/// overdetermined (2r + 1 <= length).
AnnihilatorPolynomial find_annihilator(const CVector& seq, const AnnihilatorMode& mode,
                                       CoefficientField field = CoefficientField::complex);

/// All roots with multiplicity, from the eigenvalues of the companion matrix.
/// Roots with |Im| <= 1e-8 (1 + |Re|) are snapped to the real axis. Sorted by
/// descending real part.
std::vector<Complex> polynomial_roots(const AnnihilatorPolynomial& p);

struct SpectrumEstimate {
  std::vector<AnnihilatorPolynomial> polynomials;
  std::vector<std::vector<Complex>> per_bin_roots;
  std::vector<Index> refit_bins;  // bins whose roots came from refit_real_modes

  std::vector<Complex> union_roots() const;
};

enum class RankMode { fixed, automatic };

struct SpectrumOptions {
  RankMode rank_mode = RankMode::fixed;
  double auto_tol = 1e-6;
  CoefficientField field = CoefficientField::real;
  /// When a bin's annihilator keeps a non-real root, replace its roots by
  /// refit_real_modes instead of passing the complex roots on.
  bool real_refit = false;
};

/// Least-squares fit of seq(l) ~ sum_n c_n z_n^l with real modes z_n and
/// free complex amplitudes c_n (variable projection, Levenberg-Marquardt),
/// started from `start`. Returns the modes sorted descending.
std::vector<double> refit_real_modes(const CVector& seq, std::vector<double> start);

/// Largest subsampling step accepted in fixed-rank mode.
inline constexpr Index kMaxFixedRankStep = 15;

/// Annihilator degree expected at bin j: (m+1)/2 for j = 0, m otherwise.
Index expected_bin_rank(Index bin, Index m);

/// Runs find_annihilator and polynomial_roots on every row of bin_spectra(y, m).
SpectrumEstimate recover_spectrum(const MeasurementSeries& y, Index m, const SpectrumOptions& options = {});

/// Frequencies of bin j as representatives min(k, d - k), ascending, without repeats.
std::vector<Index> folded_frequencies(Index bin, Index d, Index m);

/// Assigns each bin's roots to its folded frequencies, largest root to the
/// lowest frequency. This is exact when the spectrum is strictly decreasing
/// on [0, (d-1)/2]. Bins j and J-j share their frequencies; their values are
/// averaged.
RealSymmetricFilter assemble_filter(const SpectrumEstimate& est, Index d, Index m);

}  // namespace dynsamp
