#include "dynsamp/experiments.hpp"

#include <cmath>
#include <limits>

#include "dynsamp/analysis.hpp"
#include "dynsamp/cadzow.hpp"
#include "dynsamp/error.hpp"
#include "dynsamp/parallel.hpp"
#include "dynsamp/pipeline.hpp"

namespace dynsamp {

Table mse_experiment(const PipelineConfig& config) {
  validate(config);
  const EvolutionOperator op = make_operator(config);
  const SamplingPattern pattern = signal_pattern(config);
  const Signal f = make_signal(config);
  const std::vector<Index> grid = level_grid(config);

  Table out{{"scale", "sigma", "threshold", "L", "formula", "monte_carlo", "standard_error", "normalized",
             "normalized_se", "trials"},
            {}};
  for (std::size_t a = 0; a < config.scales.size(); ++a) {
    for (std::size_t s = 0; s < config.sigma.size(); ++s) {
      const double sigma = config.sigma[s];
      MonteCarloOptions opts;
      opts.trials = config.trials;
      // Scales and sigmas get independent noise; the thresholding variants share it.
      opts.seed = derive_seed(config.seed, a * config.sigma.size() + s);
      std::vector<bool> variants{false};
      if (config.threshold) variants.push_back(true);
      for (bool thr : variants) {
        opts.threshold = thr;
        const MseEstimate est = monte_carlo_mse(op, pattern, config.scales[a] * f, sigma, grid, opts);
        const double s2 = sigma * sigma;
        for (const MsePoint& p : est.per_level) {
          out.add_row({format_number(config.scales[a]), format_number(sigma), thr ? "1" : "0",
                       std::to_string(p.levels), format_number(p.formula), format_number(p.monte_carlo),
                       format_number(p.standard_error), format_number(s2 > 0 ? p.monte_carlo / s2 : 0.0),
                       format_number(s2 > 0 ? p.standard_error / s2 : 0.0), std::to_string(p.trials)});
        }
      }
    }
  }
  return out;
}

std::vector<CadzowPoint> cadzow_sweep(const PipelineConfig& config) {
  validate(config);
  if (config.trials < 2) throw ValidationError("the Cadzow sweep needs at least 2 trials");
  const SamplingPattern omega = operator_pattern(config);
  const EvolutionOperator op = make_operator(config);
  const Matrix clean = subsample_rows(evolve(op, make_signal(config), config.L), omega);
  const std::vector<Index> ranks = config.ranks.empty() ? std::vector<Index>{0, config.m} : config.ranks;

  std::vector<CadzowPoint> points;
  for (std::size_t s = 0; s < config.sigma.size(); ++s) {
    const double sigma = config.sigma[s];
    // errors[t][r]: trial t, rank index r. Every rank sees the same noise.
    std::vector<std::vector<double>> errors(config.trials, std::vector<double>(ranks.size()));
    parallel_for(config.trials, 0, [&](Index t) {
      const std::uint64_t seed = derive_seed(derive_seed(config.seed, s), static_cast<std::uint64_t>(t));
      const MeasurementSeries y(add_noise(clean, NoiseModel{sigma, seed}), omega, SeriesKind::noisy);
      for (std::size_t r = 0; r < ranks.size(); ++r) {
        if (ranks[r] == 0) {
          errors[t][r] = relative_error(y.values, clean);
          continue;
        }
        DenoiseOptions opts;
        opts.k_max = config.k_max;
        opts.rank = ranks[r];
        const DenoiseResult res = denoise_series(y, config.m, opts);
        errors[t][r] = relative_error(res.series.values, clean.leftCols(res.series.values.cols()));
      }
    });
    for (std::size_t r = 0; r < ranks.size(); ++r) {
      double sum = 0.0, sum_sq = 0.0;
      for (const auto& row : errors) {
        sum += row[r];
        sum_sq += row[r] * row[r];
      }
      const double n = static_cast<double>(config.trials);
      const double mean = sum / n;
      const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
      points.push_back({sigma, ranks[r], mean, std::sqrt(var / n), config.trials});
    }
  }
  return points;
}

Table cadzow_table(const std::vector<CadzowPoint>& points) {
  Table out{{"sigma", "rank", "mean_relative_error", "standard_error", "trials"}, {}};
  for (const auto& p : points) {
    out.add_row({format_number(p.sigma), std::to_string(p.rank), format_number(p.mean_error),
                 format_number(p.standard_error), std::to_string(p.trials)});
  }
  return out;
}

Table spectrum_experiment(const PipelineConfig& config) {
  validate(config);
  const SamplingPattern omega = operator_pattern(config);
  const EvolutionOperator op = make_operator(config);
  const Vector truth = op.filter()->spectrum();
  const Matrix clean = subsample_rows(evolve(op, make_signal(config), config.L), omega);
  const Index h = config.d / 2;

  Table out{{"sigma", "frequency", "estimate", "truth", "abs_error", "status"}, {}};
  for (std::size_t s = 0; s < config.sigma.size(); ++s) {
    const double sigma = config.sigma[s];
    Vector estimate = Vector::Constant(h + 1, std::numeric_limits<double>::quiet_NaN());
    std::string status = "ok";
    try {
      MeasurementSeries y(add_noise(clean, NoiseModel{sigma, derive_seed(config.seed, s)}), omega,
                          SeriesKind::noisy);
      if (config.denoise && sigma > 0.0) {
        DenoiseOptions opts;
        opts.k_max = config.k_max;
        if (!config.ranks.empty() && config.ranks.front() > 0) opts.rank = config.ranks.front();
        y = denoise_series(y, config.m, opts).series;
      }
      SpectrumOptions opts;
      opts.rank_mode = config.rank_mode;
      opts.real_refit = config.real_refit;
      estimate = assemble_filter(recover_spectrum(y, config.m, opts), config.d, config.m).spectrum().head(h + 1);
    } catch (const NumericalError&) {
      status = "numerical_failure";
    }
    for (Index k = 0; k <= h; ++k) {
      out.add_row({format_number(sigma), std::to_string(k), format_number(estimate(k)), format_number(truth(k)),
                   format_number(std::abs(estimate(k) - truth(k))), status});
    }
  }
  return out;
}

Table pipeline_sweep(const PipelineConfig& config) {
  Table out{{"sigma", "signal_error", "filter_error", "noisy_error", "denoised_error"}, {}};
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (std::size_t s = 0; s < config.sigma.size(); ++s) {
    const PipelineReport r = run_pipeline(config, config.sigma[s], derive_seed(config.seed, s));
    out.add_row({format_number(r.sigma), format_number(r.signal_error), opt(r.filter_error), opt(r.noisy_error),
                 opt(r.denoised_error)});
  }
  return out;
}

}  // namespace dynsamp
