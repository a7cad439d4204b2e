#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dynsamp/core.hpp"
#include "dynsamp/simulate.hpp"
#include "dynsamp/spectrum.hpp"

namespace dynsamp {

/// Flat parameter record shared by every CLI subcommand. Location lists are
/// 1-based, as printed in figures; they are converted on use.
struct PipelineConfig {
  Index d = 15;
  Index m = 3;
  std::vector<Index> Omega;        // empty: uniform with step m
  std::vector<Index> Omega_extra;  // added for signal recovery only
  std::vector<double> sigma{0.0};  // more than one value runs a sweep
  Index L = 100;
  Index trials = 1;
  Index k_max = 25;
  RankMode rank_mode = RankMode::fixed;
  std::vector<Index> ranks;        // Cadzow rank override(s); 0 = no denoising baseline
  Index block = 1;
  BlockMode block_mode = BlockMode::mean;
  std::uint64_t seed = 0;
  bool denoise = true;
  bool threshold = false;
  bool real_refit = true;  // refit bins whose annihilator has non-real roots
  std::string filter = "staircase";  // staircase | five-tap | identity
  std::vector<double> filter_half_taps;
  std::string signal = "reference";  // reference | random | sparse
  double signal_norm = 1.0;
  std::vector<Index> support;        // 1-based, for signal = sparse
  std::vector<double> scales{1.0};
  Index L_min = 0;  // 0: d
  Index L_max = 0;  // 0: d + 50
  Index L_step = 5;
  Index recovery_levels = 0;  // 0: all aggregated levels
  Index start = 0;            // first raw time level used
  std::string input;
  std::string output;
  std::string layout = "rows-are-time";
  bool header = false;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Names of all config keys, in serialization order.
const std::vector<std::string>& config_keys();

/// Applies key -> value text pairs on top of `base`. Unknown keys and
/// unparsable values throw ValidationError.
PipelineConfig apply_fields(const std::map<std::string, std::string>& fields, PipelineConfig base = {});

std::string to_key_value(const PipelineConfig& config);
std::string to_json(const PipelineConfig& config);

/// Reads key=value text or, when the first non-blank character is '{', a
/// flat JSON object with the same keys.
std::map<std::string, std::string> parse_config_fields(std::string_view text);
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

/// Checks ranges and cross-field constraints; throws ValidationError.
void validate(const PipelineConfig& config);

/// Omega as a 0-based pattern (uniform with step m when Omega is empty).
SamplingPattern operator_pattern(const PipelineConfig& config);
/// Omega together with Omega_extra.
SamplingPattern signal_pattern(const PipelineConfig& config);

EvolutionOperator make_operator(const PipelineConfig& config);
Signal make_signal(const PipelineConfig& config);
std::vector<Index> level_grid(const PipelineConfig& config);

}  // namespace dynsamp
