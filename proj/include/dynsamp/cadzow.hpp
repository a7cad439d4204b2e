#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dynsamp/core.hpp"
#include "dynsamp/simulate.hpp"

namespace dynsamp {

/// Square matrix with entries(p, q) depending only on p + q.
struct HankelMatrix {
  CMatrix entries;
  Index bin = 0;
};

/// (n x n) Hankel matrix of a length 2n-1 sequence.
CMatrix hankel_from_sequence(const CVector& seq);

/// Mean of each anti-diagonal; the inverse of hankel_from_sequence on Hankel input.
CVector antidiagonal_average(const CMatrix& x);

/// One Cadzow step: keep the leading `rank` singular triplets, then average
/// the anti-diagonals.
HankelMatrix cadzow_project(const CMatrix& x, Index rank, Index bin = 0);

/// sigma_{rank+1} / sigma_1 of x (0 when rank >= size).
double rank_ratio(const CMatrix& x, Index rank);

struct DenoiseOptions {
  Index k_max = 25;
  /// Same truncation rank for every bin. Unset: (m+1)/2 for bin 0, m otherwise.
  std::optional<Index> rank;
  /// Stop a bin early when successive iterates differ by at most this, relative.
  double early_exit_tol = 1e-12;
};

struct DenoiseResult {
  MeasurementSeries series;
  std::vector<Index> ranks;          // per bin
  std::vector<Index> iterations;     // per bin
  std::vector<double> rank_ratios;   // sigma_{r+1} / sigma_1 of each final Hankel matrix
  std::vector<std::string> warnings;
};

/// Cadzow denoising of a uniformly subsampled real series.
///
/// Each time level is transformed to its J bins, every bin sequence is
/// folded into a square Hankel matrix and pushed towards rank r_j by
/// cadzow_project, and the anti-diagonals are transformed back. An odd L
/// drops the last time level (reported in warnings). The data are real, so
/// bin J-j is the conjugate of bin j; only bins 0..(J-1)/2 are computed and
/// the rest mirrored, which keeps the output exactly real.
DenoiseResult denoise_series(const MeasurementSeries& y, Index m, const DenoiseOptions& options = {});

}  // namespace dynsamp
