#include "dynsamp/pipeline.hpp"

#include <chrono>
#include <ostream>

#include "dynsamp/analysis.hpp"
#include "dynsamp/cadzow.hpp"
#include "dynsamp/error.hpp"
#include "dynsamp/presets.hpp"
#include "dynsamp/recover.hpp"
#include "dynsamp/spectrum.hpp"

namespace dynsamp {

namespace {

std::string join(const std::vector<Index>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string config_echo(const PipelineConfig& c, double sigma) {
  return "[d=" + std::to_string(c.d) + " m=" + std::to_string(c.m) + " Omega={" +
         join(operator_pattern(c).one_based()) + "} Omega_extra={" + join(c.Omega_extra) +
         "} sigma=" + format_number(sigma) + " L=" + std::to_string(c.L) +
         " block=" + std::to_string(c.block) + "]";
}

template <typename F>
auto run_stage(const char* name, const std::string& echo, std::vector<StageTiming>& timings, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  auto prefix = [&](const std::exception& e) {
    return std::string("stage ") + name + ": " + e.what() + " " + echo;
  };
  try {
    auto result = body();
    timings.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    return result;
  } catch (const ValidationError& e) {
    throw ValidationError(prefix(e));
  } catch (const NumericalError& e) {
    throw NumericalError(prefix(e));
  } catch (const IoError& e) {
    throw IoError(prefix(e));
  }
}

struct RawData {
  Matrix noisy;
  std::optional<Matrix> clean;
  std::optional<EvolutionOperator> truth;
};

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& config) {
  return run_pipeline(config, config.sigma.front(), config.seed);
}

PipelineReport run_pipeline(const PipelineConfig& c, double sigma, std::uint64_t seed) {
  validate(c);
  const std::string echo = config_echo(c, sigma);
  PipelineReport report;
  report.sigma = sigma;
  auto& timings = report.timings;

  const SamplingPattern omega = operator_pattern(c);
  const SamplingPattern omega_e = signal_pattern(c);
  if (omega.uniform_step() != c.m) {
    throw ValidationError("Omega must be the uniform pattern with step m = " + std::to_string(c.m) +
                          " for spectrum recovery " + echo);
  }

  // Precondition gate: Omega + Omega_extra must determine the state.
  {
    const EvolutionOperator probe = c.input.empty()
                                        ? make_operator(c)
                                        : EvolutionOperator::circulant(presets::staircase_filter(c.d));
    if (!check_recoverability(probe, omega_e).recoverable) {
      throw ValidationError("Omega + Omega_extra = {" + join(omega_e.one_based()) +
                            "} cannot determine the signal; add sampling locations " + echo);
    }
  }

  const RawData raw = run_stage("load", echo, timings, [&] {
    RawData r;
    if (!c.input.empty()) {
      MeasurementSeries s = load_series(c.input, parse_layout(c.layout), c.header);
      if (s.values.rows() != c.d) {
        throw ValidationError("input has " + std::to_string(s.values.rows()) + " locations, config d = " +
                              std::to_string(c.d));
      }
      r.noisy = std::move(s.values);
    } else {
      EvolutionOperator op = make_operator(c);
      const Index raw_levels = c.start + c.block * (c.L + 1);
      r.clean = evolve(op, make_signal(c), raw_levels - 1);
      r.noisy = add_noise(*r.clean, NoiseModel{sigma, seed});
      r.truth = std::move(op);
    }
    if (c.start >= r.noisy.cols()) throw ValidationError("start is beyond the last time level");
    return r;
  });

  const auto [noisy, clean] = run_stage("block_aggregate", echo, timings, [&] {
    const Index n = raw.noisy.cols() - c.start;
    Matrix nz = block_aggregate(raw.noisy.rightCols(n), c.block, c.block_mode);
    std::optional<Matrix> cl;
    if (raw.clean) cl = block_aggregate(raw.clean->rightCols(n), c.block, c.block_mode);
    return std::pair{std::move(nz), std::move(cl)};
  });

  const MeasurementSeries y = run_stage("subsample", echo, timings, [&] {
    return sample_series(noisy, omega, SeriesKind::noisy);
  });

  const MeasurementSeries z = run_stage("denoise", echo, timings, [&] {
    if (!c.denoise) return y;
    DenoiseOptions opts;
    opts.k_max = c.k_max;
    if (!c.ranks.empty() && c.ranks.front() > 0) opts.rank = c.ranks.front();
    DenoiseResult res = denoise_series(y, c.m, opts);
    report.warnings.insert(report.warnings.end(), res.warnings.begin(), res.warnings.end());
    return std::move(res.series);
  });

  if (clean) {
    const Matrix ref = subsample_rows(*clean, omega);
    report.noisy_error = relative_error(y.values, ref);
    report.denoised_error = relative_error(z.values, ref.leftCols(z.values.cols()));
  }

  const SpectrumEstimate est = run_stage("recover_spectrum", echo, timings, [&] {
    SpectrumOptions opts;
    opts.rank_mode = c.rank_mode;
    opts.real_refit = c.real_refit;
    return recover_spectrum(z, c.m, opts);
  });
  report.spectrum_roots = est.union_roots();
  for (Index j : est.refit_bins) {
    report.warnings.push_back("bin " + std::to_string(j) + ": annihilator roots were not real, refit with real modes");
  }

  const RealSymmetricFilter filter =
      run_stage("assemble_filter", echo, timings, [&] { return assemble_filter(est, c.d, c.m); });
  report.filter_taps = filter.taps();
  report.folded_spectrum = filter.spectrum().head(c.d / 2 + 1);
  if (raw.truth) {
    report.true_taps = raw.truth->filter()->taps();
    report.filter_error = (filter.taps() - *report.true_taps).norm() / report.true_taps->norm();
  }

  report.signal = run_stage("recover_signal", echo, timings, [&] {
    const EvolutionOperator estimated = EvolutionOperator::circulant(filter);
    if (!check_recoverability(estimated, omega_e).recoverable) {
      throw NumericalError("estimated operator does not make Omega + Omega_extra recoverable");
    }
    const MeasurementSeries samples = sample_series(noisy, omega_e, SeriesKind::noisy);
    const Index levels = c.recovery_levels > 0 ? std::min(c.recovery_levels, samples.levels())
                                               : samples.levels();
    return recover_signal(estimated, samples, levels);
  });

  report.reference = clean ? Signal(clean->col(0)) : Signal(noisy.col(0));
  report.signal_error = relative_error(report.signal, report.reference);
  return report;
}

std::map<std::string, Table> report_tables(const PipelineReport& r) {
  std::map<std::string, Table> out;

  Table metrics{{"metric", "value"}, {}};
  metrics.add_row({"sigma", format_number(r.sigma)});
  metrics.add_row({"signal_relative_error", format_number(r.signal_error)});
  if (r.filter_error) metrics.add_row({"filter_relative_error", format_number(*r.filter_error)});
  if (r.noisy_error) metrics.add_row({"noisy_relative_error", format_number(*r.noisy_error)});
  if (r.denoised_error) metrics.add_row({"denoised_relative_error", format_number(*r.denoised_error)});
  out["metrics"] = std::move(metrics);

  Table spectrum{{"frequency", "estimate", "truth"}, {}};
  std::optional<Vector> true_spec;
  if (r.true_taps) true_spec = RealSymmetricFilter(*r.true_taps).spectrum();
  for (Index k = 0; k < r.folded_spectrum.size(); ++k) {
    spectrum.add_row({std::to_string(k), format_number(r.folded_spectrum(k)),
                      true_spec ? format_number((*true_spec)(k)) : ""});
  }
  out["spectrum"] = std::move(spectrum);

  Table filter{{"tap", "estimate", "truth"}, {}};
  for (Index k = 0; k < r.filter_taps.size(); ++k) {
    filter.add_row({std::to_string(k), format_number(r.filter_taps(k)),
                    r.true_taps ? format_number((*r.true_taps)(k)) : ""});
  }
  out["filter"] = std::move(filter);

  Table signal{{"location", "recovered", "reference"}, {}};
  for (Index i = 0; i < r.signal.size(); ++i) {
    signal.add_row({std::to_string(i + 1), format_number(r.signal(i)), format_number(r.reference(i))});
  }
  out["signal"] = std::move(signal);
  return out;
}

void print_report(std::ostream& out, const PipelineReport& r) {
  out << "sigma: " << format_number(r.sigma) << "\n";
  out << "signal relative error: " << format_number(r.signal_error) << "\n";
  if (r.filter_error) out << "filter relative error: " << format_number(*r.filter_error) << "\n";
  if (r.noisy_error) out << "noisy data relative error: " << format_number(*r.noisy_error) << "\n";
  if (r.denoised_error) out << "denoised data relative error: " << format_number(*r.denoised_error) << "\n";
  out << "estimated spectrum (folded frequencies 0.." << r.folded_spectrum.size() - 1 << "):";
  for (Index k = 0; k < r.folded_spectrum.size(); ++k) out << " " << format_number(r.folded_spectrum(k));
  out << "\n";
  for (const auto& w : r.warnings) out << "warning: " << w << "\n";
  for (const auto& t : r.timings) out << "time " << t.stage << ": " << t.seconds << " s\n";
}

}  // namespace dynsamp
