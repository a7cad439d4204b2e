#pragma once

#include <cstdint>
#include <vector>

#include "dynsamp/core.hpp"

namespace dynsamp {

/// Eigenvalues, descending, of sum_{i=0}^{L-1} (A^*)^i S_Omega A^i.
struct GramSpectrum {
  Vector eigenvalues;
  Index levels = 0;
  /// False when the smallest eigenvalue is numerically zero (Omega does not
  /// determine f from L levels).
  bool full_rank = false;
};

/// Eigenvalues below this fraction of the largest one are treated as zero.
inline constexpr double kGramTolerance = 1e-13;

/// The Gram matrix itself, accumulated by advancing the rows S_Omega A^i.
Matrix gram_matrix(const EvolutionOperator& op, const SamplingPattern& pattern, Index levels);

GramSpectrum gram_spectrum(const EvolutionOperator& op, const SamplingPattern& pattern, Index levels);

/// Gram eigenvalue for a normal operator without subsampling:
/// (1 - |s|^{2L}) / (1 - |s|^2), or L when |s| = 1.
double lambda_closed_form(Complex s, Index levels);

/// Expected squared error sigma^2 * sum_j 1 / lambda_j of the least-squares
/// estimate. sigma is the noise standard deviation.
double mse_formula(double sigma, const GramSpectrum& spectrum);

struct MsePoint {
  Index levels = 0;
  double formula = 0.0;         // sigma^2 sum 1/lambda_j
  double monte_carlo = 0.0;     // mean of ||f# - f||^2 over trials
  double standard_error = 0.0;  // of monte_carlo
  Index trials = 0;
  Vector mean_error;            // componentwise mean of f# - f
  Vector mean_error_se;         // its standard error
};

struct MseEstimate {
  double sigma = 0.0;
  std::vector<MsePoint> per_level;
};

struct MonteCarloOptions {
  Index trials = 100;
  std::uint64_t seed = 0;
  /// Zero samples and estimates with magnitude <= 2 sigma.
  bool threshold = false;
  /// Worker threads; 0 reads DYNSAMP_WORKERS, falling back to the core count.
  unsigned workers = 0;
};

/// Monte Carlo estimate of E||f#_L - f||^2 for every L in `level_grid`,
/// where f#_L uses time levels 0..L-1. Each trial draws one noise vector per
/// time level and reuses it for every L (common random numbers).
MseEstimate monte_carlo_mse(const EvolutionOperator& op, const SamplingPattern& pattern, const Signal& f,
                            double sigma, std::vector<Index> level_grid,
                            const MonteCarloOptions& options = {});

/// ||z - ref||_F / ||ref||_F.
double relative_error(const Matrix& z, const Matrix& ref);

/// Worker count for parallel sections: DYNSAMP_WORKERS if set, else the core count.
unsigned default_workers();

}  // namespace dynsamp
