#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dynsamp/config.hpp"
#include "dynsamp/csv.hpp"

namespace dynsamp {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineReport {
  double sigma = 0.0;
  Vector filter_taps;              // estimated filter
  Vector folded_spectrum;          // estimated spectrum at k = 0 .. d/2
  std::vector<Complex> spectrum_roots;
  Signal signal;                   // recovered initial state
  Signal reference;                // generating state, or the measured one
  double signal_error = 0.0;       // ||signal - reference|| / ||reference||
  std::optional<Vector> true_taps; // simulated runs only
  std::optional<double> filter_error;
  std::optional<double> noisy_error;     // ||Y - S_m Pi|| / ||S_m Pi||
  std::optional<double> denoised_error;  // ||Z - S_m Pi|| / ||S_m Pi||
  std::vector<StageTiming> timings;
  std::vector<std::string> warnings;
};

/// Runs block_aggregate -> subsample -> denoise_series -> recover_spectrum
/// -> assemble_filter -> streaming least squares on Omega + Omega_extra.
///
/// Data come from config.input when set, otherwise they are simulated from
/// config.filter and config.signal with noise (sigma, seed). Before any
/// computation Omega + Omega_extra is checked for recoverability, against
/// the generating operator or, for loaded data, against a filter with
/// distinct folded eigenvalues. Stage failures are rethrown with the stage
/// name and a config echo, keeping their error category.
PipelineReport run_pipeline(const PipelineConfig& config, double sigma, std::uint64_t seed);
PipelineReport run_pipeline(const PipelineConfig& config);

/// Deterministic CSV tables of a report (no timings): metrics, spectrum,
/// filter and signal.
std::map<std::string, Table> report_tables(const PipelineReport& report);

void print_report(std::ostream& out, const PipelineReport& report);

}  // namespace dynsamp
