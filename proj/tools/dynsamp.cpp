// Command-line front end: simulation, recovery stages, experiment presets
// and the end-to-end pipeline. Location lists on the command line and in
// config files are 1-based.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dynsamp/analysis.hpp"
#include "dynsamp/cadzow.hpp"
#include "dynsamp/config.hpp"
#include "dynsamp/csv.hpp"
#include "dynsamp/error.hpp"
#include "dynsamp/experiments.hpp"
#include "dynsamp/pipeline.hpp"
#include "dynsamp/recover.hpp"
#include "dynsamp/spectrum.hpp"

namespace fs = std::filesystem;
using namespace dynsamp;

namespace {

struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::map<std::string, std::string> overrides;
  bool dump_config = false;
};

Command add_command(CLI::App& root, const std::string& name, const std::string& help) {
  Command cmd;
  cmd.app = root.add_subcommand(name, help);
  return cmd;
}

// Every config key becomes --<key>; only keys given on the command line are
// collected, so they override the config file.
void bind_keys(Command& cmd) {
  cmd.app->add_option("--config", cmd.config_path, "key=value or JSON config file");
  cmd.app->add_flag("--dump-config", cmd.dump_config, "print the effective config and exit");
  for (const std::string& key : config_keys()) {
    cmd.app->add_option_function<std::string>(
        "--" + key, [&cmd, key](const std::string& v) { cmd.overrides[key] = v; }, "config key " + key);
  }
}

PipelineConfig resolve(const Command& cmd) {
  PipelineConfig base = cmd.config_path.empty() ? PipelineConfig{} : load_config(cmd.config_path);
  PipelineConfig cfg = apply_fields(cmd.overrides, base);
  validate(cfg);
  return cfg;
}

void emit(const Table& table, const PipelineConfig& cfg) {
  if (cfg.output.empty()) {
    write_table(std::cout, table);
  } else {
    save_table(cfg.output, table);
  }
}

Table matrix_table(const Matrix& values, const std::string& prefix) {
  Table t;
  for (Index c = 0; c < values.cols(); ++c) t.columns.push_back(prefix + std::to_string(c + 1));
  for (Index r = 0; r < values.rows(); ++r) {
    std::vector<std::string> row;
    for (Index c = 0; c < values.cols(); ++c) row.push_back(format_number(values(r, c)));
    t.add_row(std::move(row));
  }
  return t;
}

Table signal_table(const Signal& f, const std::optional<Signal>& reference) {
  Table t{{"location", "value"}, {}};
  if (reference) t.columns.push_back("reference");
  for (Index i = 0; i < f.size(); ++i) {
    std::vector<std::string> row{std::to_string(i + 1), format_number(f(i))};
    if (reference) row.push_back(format_number((*reference)(i)));
    t.add_row(std::move(row));
  }
  return t;
}

Matrix load_input(const PipelineConfig& cfg) {
  Matrix v = load_series(cfg.input, parse_layout(cfg.layout), cfg.header).values;
  if (v.rows() != cfg.d) {
    throw ValidationError(cfg.input + " has " + std::to_string(v.rows()) + " locations, config d = " +
                          std::to_string(cfg.d));
  }
  return v;
}

int run_simulate(const PipelineConfig& cfg) {
  const Matrix clean = evolve(make_operator(cfg), make_signal(cfg), cfg.L);
  const Matrix noisy = add_noise(clean, NoiseModel{cfg.sigma.front(), cfg.seed});
  const Layout layout = parse_layout(cfg.layout);
  if (!cfg.output.empty()) {
    save_series(cfg.output, noisy, layout, cfg.header);
  } else {
    const Matrix table = layout == Layout::rows_are_time ? Matrix(noisy.transpose()) : noisy;
    write_table(std::cout, matrix_table(table, layout == Layout::rows_are_time ? "x" : "t"));
  }
  return 0;
}

int run_recover_signal(const PipelineConfig& cfg) {
  const EvolutionOperator op = make_operator(cfg);
  const SamplingPattern pattern = signal_pattern(cfg);
  std::optional<Signal> reference;
  Matrix data;
  if (!cfg.input.empty()) {
    data = load_input(cfg);
  } else {
    const Matrix clean = evolve(op, make_signal(cfg), cfg.L);
    reference = clean.col(0);
    data = add_noise(clean, NoiseModel{cfg.sigma.front(), cfg.seed});
  }
  const MeasurementSeries samples = sample_series(data, pattern, SeriesKind::noisy);
  std::optional<Index> levels;
  if (cfg.recovery_levels > 0) levels = std::min(cfg.recovery_levels, samples.levels());
  Signal f = recover_signal(op, samples, levels);
  if (cfg.threshold) f = apply_threshold(f, cfg.sigma.front());
  emit(signal_table(f, reference), cfg);
  if (reference) std::cerr << "relative error: " << format_number(relative_error(f, *reference)) << "\n";
  return 0;
}

int run_recover_spectrum(const PipelineConfig& cfg) {
  if (cfg.input.empty()) {
    emit(spectrum_experiment(cfg), cfg);
    return 0;
  }
  MeasurementSeries y = sample_series(load_input(cfg), operator_pattern(cfg), SeriesKind::noisy);
  if (cfg.denoise) {
    DenoiseOptions opts;
    opts.k_max = cfg.k_max;
    if (!cfg.ranks.empty() && cfg.ranks.front() > 0) opts.rank = cfg.ranks.front();
    y = denoise_series(y, cfg.m, opts).series;
  }
  SpectrumOptions opts;
  opts.rank_mode = cfg.rank_mode;
  opts.real_refit = cfg.real_refit;
  const RealSymmetricFilter filter = assemble_filter(recover_spectrum(y, cfg.m, opts), cfg.d, cfg.m);
  const Vector spec = filter.spectrum();
  Table t{{"frequency", "eigenvalue", "tap"}, {}};
  for (Index k = 0; k < cfg.d; ++k) {
    t.add_row({std::to_string(k), format_number(spec(k)), format_number(filter.taps()(k))});
  }
  emit(t, cfg);
  return 0;
}

int run_denoise(const PipelineConfig& cfg) {
  if (cfg.input.empty()) {
    emit(cadzow_table(cadzow_sweep(cfg)), cfg);
    return 0;
  }
  const MeasurementSeries y = sample_series(load_input(cfg), operator_pattern(cfg), SeriesKind::noisy);
  DenoiseOptions opts;
  opts.k_max = cfg.k_max;
  if (!cfg.ranks.empty() && cfg.ranks.front() > 0) opts.rank = cfg.ranks.front();
  const DenoiseResult res = denoise_series(y, cfg.m, opts);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  const Layout layout = parse_layout(cfg.layout);
  if (!cfg.output.empty()) {
    save_series(cfg.output, res.series.values, layout, cfg.header);
  } else {
    const Matrix& v = res.series.values;
    const Matrix table = layout == Layout::rows_are_time ? Matrix(v.transpose()) : v;
    write_table(std::cout, matrix_table(table, layout == Layout::rows_are_time ? "x" : "t"));
  }
  return 0;
}

int run_mse(const PipelineConfig& cfg) {
  emit(mse_experiment(cfg), cfg);
  return 0;
}

int run_pipeline_cmd(const PipelineConfig& cfg) {
  if (cfg.sigma.size() > 1) {
    emit(pipeline_sweep(cfg), cfg);
    return 0;
  }
  const PipelineReport report = run_pipeline(cfg);
  print_report(std::cout, report);
  if (!cfg.output.empty()) {
    fs::create_directories(cfg.output);
    for (const auto& [name, table] : report_tables(report)) save_table(fs::path(cfg.output) / (name + ".csv"), table);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical sampling: signal and filter recovery from space-time samples"};
  app.require_subcommand(1);

  std::vector<std::pair<Command, int (*)(const PipelineConfig&)>> commands;
  commands.emplace_back(add_command(app, "simulate", "generate a noisy trajectory as CSV"), run_simulate);
  commands.emplace_back(add_command(app, "recover-signal", "least-squares recovery of the initial state"),
                        run_recover_signal);
  commands.emplace_back(add_command(app, "recover-spectrum", "recover the filter spectrum from uniform samples"),
                        run_recover_spectrum);
  commands.emplace_back(add_command(app, "denoise", "Cadzow denoising of uniform samples, or a rank sweep"),
                        run_denoise);
  commands.emplace_back(add_command(app, "mse-analyze", "Monte Carlo and theoretical MSE against L"), run_mse);
  commands.emplace_back(add_command(app, "pipeline", "denoise, recover the filter, recover the signal"),
                        run_pipeline_cmd);
  for (auto& [cmd, fn] : commands) bind_keys(cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [cmd, fn] : commands) {
      if (!cmd.app->parsed()) continue;
      const PipelineConfig cfg = resolve(cmd);
      if (cmd.dump_config) {
        std::cout << to_key_value(cfg);
        return 0;
      }
      return fn(cfg);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
