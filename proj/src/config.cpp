#include "dynsamp/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "dynsamp/error.hpp"
#include "dynsamp/presets.hpp"

namespace dynsamp {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss{std::string(s)};
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view text) {
  throw ValidationError("config key '" + key + "': cannot parse '" + std::string(text) + "'");
}

template <typename T>
T parse_number(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) bad_value(key, text);
  return value;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Value codecs, one per field type.
void decode(const std::string& key, std::string_view t, Index& v) { v = parse_number<Index>(key, t); }
void decode(const std::string& key, std::string_view t, std::uint64_t& v) { v = parse_number<std::uint64_t>(key, t); }
void decode(const std::string& key, std::string_view t, double& v) { v = parse_number<double>(key, t); }
void decode(const std::string&, std::string_view t, std::string& v) { v = trim(t); }
void decode(const std::string& key, std::string_view t, bool& v) {
  const std::string s = trim(t);
  if (s == "true" || s == "1" || s == "yes") v = true;
  else if (s == "false" || s == "0" || s == "no") v = false;
  else bad_value(key, t);
}
void decode(const std::string& key, std::string_view t, RankMode& v) {
  const std::string s = trim(t);
  if (s == "fixed") v = RankMode::fixed;
  else if (s == "auto") v = RankMode::automatic;
  else bad_value(key, t);
}
void decode(const std::string& key, std::string_view t, BlockMode& v) {
  const std::string s = trim(t);
  if (s == "mean") v = BlockMode::mean;
  else if (s == "sum") v = BlockMode::sum;
  else bad_value(key, t);
}
template <typename T>
void decode(const std::string& key, std::string_view t, std::vector<T>& v) {
  v.clear();
  for (const auto& item : split_list(t)) {
    T x{};
    decode(key, item, x);
    v.push_back(x);
  }
}

std::string encode(Index v) { return std::to_string(v); }
std::string encode(std::uint64_t v) { return std::to_string(v); }
std::string encode(double v) { return format_double(v); }
std::string encode(const std::string& v) { return v; }
std::string encode(bool v) { return v ? "true" : "false"; }
std::string encode(RankMode v) { return v == RankMode::fixed ? "fixed" : "auto"; }
std::string encode(BlockMode v) { return v == BlockMode::mean ? "mean" : "sum"; }
template <typename T>
std::string encode(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + encode(v[i]);
  return out;
}

template <typename T>
nlohmann::json to_json_value(const T& v) {
  if constexpr (std::is_same_v<T, RankMode> || std::is_same_v<T, BlockMode>) {
    return encode(v);
  } else {
    return v;
  }
}

struct Field {
  std::string name;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<nlohmann::json(const PipelineConfig&)> get_json;
  std::function<void(PipelineConfig&, std::string_view)> set;
};

template <typename T>
Field field(std::string name, T PipelineConfig::*member) {
  return Field{name, [member](const PipelineConfig& c) { return encode(c.*member); },
               [member](const PipelineConfig& c) { return to_json_value(c.*member); },
               [member, name](PipelineConfig& c, std::string_view t) { decode(name, t, c.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      field("d", &PipelineConfig::d),
      field("m", &PipelineConfig::m),
      field("Omega", &PipelineConfig::Omega),
      field("Omega_extra", &PipelineConfig::Omega_extra),
      field("sigma", &PipelineConfig::sigma),
      field("L", &PipelineConfig::L),
      field("trials", &PipelineConfig::trials),
      field("k_max", &PipelineConfig::k_max),
      field("rank_mode", &PipelineConfig::rank_mode),
      field("ranks", &PipelineConfig::ranks),
      field("block", &PipelineConfig::block),
      field("block_mode", &PipelineConfig::block_mode),
      field("seed", &PipelineConfig::seed),
      field("denoise", &PipelineConfig::denoise),
      field("threshold", &PipelineConfig::threshold),
      field("real_refit", &PipelineConfig::real_refit),
      field("filter", &PipelineConfig::filter),
      field("filter_half_taps", &PipelineConfig::filter_half_taps),
      field("signal", &PipelineConfig::signal),
      field("signal_norm", &PipelineConfig::signal_norm),
      field("support", &PipelineConfig::support),
      field("scales", &PipelineConfig::scales),
      field("L_min", &PipelineConfig::L_min),
      field("L_max", &PipelineConfig::L_max),
      field("L_step", &PipelineConfig::L_step),
      field("recovery_levels", &PipelineConfig::recovery_levels),
      field("start", &PipelineConfig::start),
      field("input", &PipelineConfig::input),
      field("output", &PipelineConfig::output),
      field("layout", &PipelineConfig::layout),
      field("header", &PipelineConfig::header),
  };
  return table;
}

std::string json_scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.name);
    return k;
  }();
  return keys;
}

PipelineConfig apply_fields(const std::map<std::string, std::string>& values, PipelineConfig base) {
  for (const auto& [key, text] : values) {
    const auto it = std::find_if(fields().begin(), fields().end(),
                                 [&](const Field& f) { return f.name == key; });
    if (it == fields().end()) throw ValidationError("unknown config key '" + key + "'");
    it->set(base, text);
  }
  return base;
}

std::string to_key_value(const PipelineConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += f.name + "=" + f.get(config) + "\n";
  return out;
}

std::string to_json(const PipelineConfig& config) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& f : fields()) j[f.name] = f.get_json(config);
  return j.dump(2) + "\n";
}

std::map<std::string, std::string> parse_config_fields(std::string_view text) {
  std::map<std::string, std::string> out;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("config JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config JSON must be a flat object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_array()) {
        std::string joined;
        for (std::size_t i = 0; i < value.size(); ++i) joined += (i ? "," : "") + json_scalar_text(value[i]);
        out[key] = joined;
      } else if (value.is_object()) {
        throw ValidationError("config key '" + key + "' must not be nested");
      } else {
        out[key] = json_scalar_text(value);
      }
    }
    return out;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

PipelineConfig parse_config(std::string_view text) { return apply_fields(parse_config_fields(text)); }

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const PipelineConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError("invalid config: " + what);
  };
  require(c.d >= 1, "d must be positive");
  require(c.m >= 1, "m must be positive");
  for (Index i : c.Omega) require(i >= 1 && i <= c.d, "Omega entries must lie in 1..d");
  for (Index i : c.Omega_extra) require(i >= 1 && i <= c.d, "Omega_extra entries must lie in 1..d");
  for (Index i : c.support) require(i >= 1 && i <= c.d, "support entries must lie in 1..d");
  require(!c.sigma.empty(), "sigma needs at least one value");
  for (double s : c.sigma) require(s >= 0.0, "sigma must be nonnegative");
  require(c.L >= 0, "L must be nonnegative");
  require(c.trials >= 1, "trials must be positive");
  require(c.k_max >= 1, "k_max must be positive");
  for (Index r : c.ranks) require(r >= 0, "ranks must be nonnegative");
  require(c.block >= 1, "block must be positive");
  require(c.filter == "staircase" || c.filter == "five-tap" || c.filter == "identity",
          "filter must be staircase, five-tap or identity");
  require(c.signal == "reference" || c.signal == "random" || c.signal == "sparse",
          "signal must be reference, random or sparse");
  require(c.signal != "reference" || c.d == 15, "the reference signal has d = 15");
  require(c.signal != "sparse" || !c.support.empty(), "signal = sparse needs a support");
  require(c.signal_norm > 0.0, "signal_norm must be positive");
  require(!c.scales.empty(), "scales needs at least one value");
  require(c.L_step >= 1, "L_step must be positive");
  require(c.recovery_levels >= 0 && c.start >= 0, "recovery_levels and start must be nonnegative");
  require(c.layout == "rows-are-time" || c.layout == "rows-are-space",
          "layout must be rows-are-time or rows-are-space");
  if (c.Omega.empty()) require(c.d % c.m == 0, "uniform Omega needs m | d");
  // Pattern construction rejects duplicates.
  (void)operator_pattern(c);
  (void)signal_pattern(c);
}

SamplingPattern operator_pattern(const PipelineConfig& c) {
  if (c.Omega.empty()) return SamplingPattern::uniform(c.d, c.m);
  return SamplingPattern::from_one_based(c.d, c.Omega);
}

SamplingPattern signal_pattern(const PipelineConfig& c) {
  const SamplingPattern base = operator_pattern(c);
  if (c.Omega_extra.empty()) return base;
  return base.merged(SamplingPattern::from_one_based(c.d, c.Omega_extra));
}

EvolutionOperator make_operator(const PipelineConfig& c) {
  if (!c.filter_half_taps.empty()) {
    return EvolutionOperator::circulant(RealSymmetricFilter::from_half_taps(c.filter_half_taps, c.d));
  }
  if (c.filter == "five-tap") return EvolutionOperator::circulant(presets::five_tap_filter(c.d));
  if (c.filter == "identity") {
    const std::vector<double> one{1.0};
    return EvolutionOperator::circulant(RealSymmetricFilter::from_half_taps(one, c.d));
  }
  return EvolutionOperator::circulant(presets::staircase_filter(c.d));
}

Signal make_signal(const PipelineConfig& c) {
  if (c.signal == "random") return presets::random_signal(c.d, c.signal_norm, c.seed);
  if (c.signal == "sparse") {
    std::vector<Index> support;
    for (Index i : c.support) support.push_back(i - 1);
    return presets::indicator_signal(c.d, support);
  }
  if (c.d != 15) throw ValidationError("the reference signal has d = 15");
  return presets::reference_signal_15();
}

std::vector<Index> level_grid(const PipelineConfig& c) {
  const Index lo = c.L_min > 0 ? c.L_min : c.d;
  const Index hi = c.L_max > 0 ? c.L_max : c.d + 50;
  std::vector<Index> grid;
  for (Index l = lo; l <= hi; l += c.L_step) grid.push_back(l);
  if (grid.empty()) throw ValidationError("empty L grid: L_min > L_max");
  return grid;
}

}  // namespace dynsamp
