#include "dynsamp/simulate.hpp"

#include <random>
#include <string>

#include "dynsamp/error.hpp"

namespace dynsamp {

MeasurementSeries::MeasurementSeries(Matrix v, SamplingPattern p, SeriesKind k)
    : values(std::move(v)), pattern(std::move(p)), kind(k) {
  if (values.cols() < 1) throw ValidationError("measurement series needs at least one time level");
  if (values.rows() != pattern.size()) {
    throw ValidationError("measurement series has " + std::to_string(values.rows()) +
                          " rows but the pattern retains " + std::to_string(pattern.size()));
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix evolve(const EvolutionOperator& op, const Signal& f, Index levels) {
  if (levels < 0) throw ValidationError("evolve: negative number of levels");
  if (f.size() != op.dim()) throw ValidationError("evolve: signal/operator dimension mismatch");
  Matrix out(f.size(), levels + 1);
  out.col(0) = f;
  for (Index n = 1; n <= levels; ++n) out.col(n) = op.apply(out.col(n - 1));
  return out;
}

Matrix add_noise(const Matrix& x, const NoiseModel& noise) {
  if (!(noise.sigma >= 0.0)) throw ValidationError("noise sigma must be nonnegative");
  if (noise.sigma == 0.0) return x;
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, noise.sigma);
  Matrix out = x;
  // Column-major fill: column n receives the draws of time level n.
  for (Index c = 0; c < out.cols(); ++c)
    for (Index r = 0; r < out.rows(); ++r) out(r, c) += gauss(rng);
  return out;
}

MeasurementSeries sample_series(const Matrix& trajectory, const SamplingPattern& pattern,
                                SeriesKind kind) {
  return MeasurementSeries(subsample_rows(trajectory, pattern), pattern, kind);
}

Matrix block_aggregate(const Matrix& x, Index block, BlockMode mode) {
  if (block < 1) throw ValidationError("block size must be positive");
  if (x.cols() < block) {
    throw ValidationError("block size " + std::to_string(block) + " exceeds the " +
                          std::to_string(x.cols()) + " available columns");
  }
  const Index blocks = x.cols() / block;
  Matrix out(x.rows(), blocks);
  for (Index k = 0; k < blocks; ++k) {
    out.col(k) = x.middleCols(k * block, block).rowwise().sum();
    if (mode == BlockMode::mean) out.col(k) /= static_cast<double>(block);
  }
  return out;
}

}  // namespace dynsamp
