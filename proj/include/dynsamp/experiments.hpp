#pragma once

#include <vector>

#include "dynsamp/config.hpp"
#include "dynsamp/csv.hpp"

namespace dynsamp {

/// E||f# - f||^2 against the number of levels, for every scale in
/// config.scales and every sigma. With config.threshold set, each point is
/// reported with and without thresholding.
/// Columns: scale, sigma, threshold, L, formula, monte_carlo, standard_error,
/// normalized, normalized_se, trials.
Table mse_experiment(const PipelineConfig& config);

struct CadzowPoint {
  double sigma = 0.0;
  Index rank = 0;  // 0: the noisy data themselves
  double mean_error = 0.0;
  double standard_error = 0.0;
  Index trials = 0;
};

/// For each sigma, `trials` noisy realizations of the subsampled trajectory
/// are drawn once and denoised at every rank in config.ranks (rank 0 keeps the
/// raw data). Reports the mean of ||Z - S_m Pi|| / ||S_m Pi||.
std::vector<CadzowPoint> cadzow_sweep(const PipelineConfig& config);
Table cadzow_table(const std::vector<CadzowPoint>& points);

/// Recovered folded spectrum per sigma next to the generating one.
/// Columns: sigma, frequency, estimate, truth, abs_error, status.
Table spectrum_experiment(const PipelineConfig& config);

/// run_pipeline for every sigma in config.sigma (seed derived per sigma).
/// Columns: sigma, signal_error, filter_error, noisy_error, denoised_error.
Table pipeline_sweep(const PipelineConfig& config);

}  // namespace dynsamp
