#pragma once

#include <cstdint>

#include "dynsamp/core.hpp"

namespace dynsamp {

/// i.i.d. zero-mean Gaussian noise; sigma is the standard deviation.
struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

enum class SeriesKind { clean, noisy, denoised };

/// Sampled values over time levels 0..L. Rows follow pattern.indices(),
/// columns are time levels.
struct MeasurementSeries {
  Matrix values;
  SamplingPattern pattern;
  SeriesKind kind = SeriesKind::clean;

  MeasurementSeries(Matrix v, SamplingPattern p, SeriesKind k = SeriesKind::clean);

  Index levels() const { return values.cols(); }
};

/// Independent seed for sub-stream `stream` of `base` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Column n holds A^n f, n = 0..L.
Matrix evolve(const EvolutionOperator& op, const Signal& f, Index levels);

/// X + H with H_ij ~ N(0, sigma^2) independent; deterministic given the seed.
Matrix add_noise(const Matrix& x, const NoiseModel& noise);

/// Subsamples each column of a d x (L+1) trajectory.
MeasurementSeries sample_series(const Matrix& trajectory, const SamplingPattern& pattern,
                                SeriesKind kind = SeriesKind::clean);

enum class BlockMode { sum, mean };

/// Column k aggregates input columns k*block .. k*block + block - 1; a
/// trailing partial block is dropped.
Matrix block_aggregate(const Matrix& x, Index block, BlockMode mode = BlockMode::mean);

}  // namespace dynsamp
