#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dynsamp/config.hpp"
#include "dynsamp/csv.hpp"
#include "dynsamp/error.hpp"
#include "oracles.hpp"

using namespace dynsamp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dynsamp_unit";
  fs::create_directories(dir);
  return dir / name;
}

PipelineConfig sample_config() {
  PipelineConfig c;
  c.d = 18;
  c.m = 1;
  c.Omega = {1, 5, 7, 10, 13, 15, 18};
  c.Omega_extra = {2};
  c.sigma = {1e-3, 2.3714e-2};
  c.L = 68;
  c.trials = 100;
  c.rank_mode = RankMode::automatic;
  c.ranks = {0, 3, 7};
  c.block = 10;
  c.block_mode = BlockMode::sum;
  c.seed = 12345678901234ULL;
  c.denoise = false;
  c.threshold = true;
  c.real_refit = false;
  c.filter = "five-tap";
  c.filter_half_taps = {1.0, 0.5, 0.125};
  c.signal = "sparse";
  c.support = {8, 9, 10};
  c.scales = {1, 10, 100};
  c.L_min = 18;
  c.L_max = 68;
  c.input = "data/log.csv";
  c.layout = "rows-are-space";
  c.header = true;
  return c;
}

}  // namespace

TEST_CASE("config round trips through both encodings") {
  const PipelineConfig c = sample_config();
  CHECK(parse_config(to_key_value(c)) == c);
  CHECK(parse_config(to_json(c)) == c);
  CHECK(parse_config(to_key_value(PipelineConfig{})) == PipelineConfig{});

  const PipelineConfig over = apply_fields({{"sigma", "1e-5"}, {"L", "30"}}, c);
  CHECK(over.sigma == std::vector<double>{1e-5});
  CHECK(over.L == 30);
  CHECK(over.d == 18);
}

TEST_CASE("config text details") {
  const PipelineConfig c = parse_config("# comment\n\nd = 15\nOmega_extra=3,15\nsigma=1e-3,1e-4\n");
  CHECK(c.d == 15);
  CHECK(c.Omega_extra == std::vector<Index>{3, 15});
  CHECK(c.sigma.size() == 2);
  CHECK_THROWS_AS(parse_config("bogus=1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("d=abc\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("just a line\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("{\"d\": {\"x\": 1}}"), ValidationError);
  CHECK_THROWS_AS(load_config(scratch("does_not_exist.cfg")), IoError);
}

TEST_CASE("config validation and patterns") {
  PipelineConfig c;
  CHECK_NOTHROW(validate(c));
  CHECK(operator_pattern(c) == SamplingPattern::uniform(15, 3));
  c.Omega_extra = {3, 15};
  CHECK(signal_pattern(c).indices() == std::vector<Index>{0, 2, 3, 6, 9, 12, 14});

  PipelineConfig bad;
  bad.m = 4;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = {};
  bad.Omega_extra = {16};
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = {};
  bad.sigma = {-1.0};
  CHECK_THROWS_AS(validate(bad), ValidationError);

  PipelineConfig grid;
  grid.d = 18;
  CHECK(level_grid(grid).front() == 18);
  CHECK(level_grid(grid).back() == 68);
  CHECK(level_grid(grid).size() == 11);
}

TEST_CASE("CSV save and load round trip") {
  oracle::Rng rng(1);
  const Matrix x = rng.normal_matrix(15, 40) * 1e-7;
  for (const Layout layout : {Layout::rows_are_time, Layout::rows_are_space}) {
    for (const bool header : {false, true}) {
      const fs::path p = scratch("round_trip.csv");
      save_series(p, x, layout, header);
      const MeasurementSeries s = load_series(p, layout, header);
      CHECK(s.values == x);
      CHECK(s.pattern == SamplingPattern::all(15));
    }
  }
}

TEST_CASE("time-major sensor log orientation") {
  const fs::path p = scratch("sensors.csv");
  {
    std::ofstream out(p);
    for (int t = 0; t < 7; ++t) {
      for (int s = 0; s < 15; ++s) out << (s ? "," : "") << 100 * t + s;
      out << "\n";
    }
  }
  const MeasurementSeries s = load_series(p, Layout::rows_are_time, false);
  CHECK(s.values.rows() == 15);
  CHECK(s.values.cols() == 7);
  CHECK(s.values(4, 2) == 204.0);
}

TEST_CASE("malformed tables name the offending row") {
  std::istringstream ragged("1,2,3\n4,5\n");
  try {
    (void)parse_table(ragged, false);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  std::istringstream word("a,b\n1,2\n3,x\n");
  try {
    (void)parse_table(word, true);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("column 2") != std::string::npos);
  }
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_table(empty, false), IoError);
  std::istringstream sci("1e-3,-2.5E+2\n");
  const Matrix m = parse_table(sci, false);
  CHECK(m(0, 0) == 1e-3);
  CHECK(m(0, 1) == -250.0);
  CHECK_THROWS_AS(load_series(scratch("missing.csv"), Layout::rows_are_time, false), IoError);
  CHECK_THROWS_AS(parse_layout("sideways"), ValidationError);
}

TEST_CASE("number formatting keeps full precision") {
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_number(x)) == x);
  std::ostringstream out;
  write_table(out, Table{{"a", "b"}, {{"1", "2"}}});
  CHECK(out.str() == "a,b\n1,2\n");
}
