#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "supstable/commands.hpp"
#include "supstable/csv.hpp"
#include "supstable/errors.hpp"
#include "supstable/run_config.hpp"

using namespace supstable;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("supstable_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig base_config() {
  RunConfig cfg;
  apply_entries(cfg, parse_config_text("alpha = 1.5\nc_plus = 1\n"
                                       "c_minus = 1\nseed = 5\n"));
  return cfg;
}

}  // namespace

TEST_CASE("config text") {
  const ConfigEntries e = parse_config_text(
      "# comment\n\n  alpha = 1.25  # trailing\nlevels=64, 128 ,256\n");
  REQUIRE(e.size() == 2);
  CHECK(e[0].first == "alpha");
  CHECK(e[0].second == "1.25");
  RunConfig cfg;
  apply_entries(cfg, e);
  CHECK(*cfg.alpha == 1.25);
  CHECK(cfg.levels == std::vector<int>{64, 128, 256});
  CHECK_THROWS_AS(parse_config_text("alpha 1.5\n"), ConfigError);
  CHECK_THROWS_AS(set_key(cfg, "alpah", "1"), ConfigError);
  CHECK_THROWS_AS(set_key(cfg, "n_paths", "-3"), ConfigError);
  CHECK_THROWS_AS(set_key(cfg, "grid_spacing", "cubic"), ConfigError);
  CHECK_THROWS_AS(set_key(cfg, "tol.nonsense.exponent", "0.1"), ConfigError);
  set_key(cfg, "tol.meander_tail.exponent", "0.3");
  CHECK(cfg.tolerances.at("meander_tail").exponent == 0.3);
  CHECK(cfg.tolerances.at("meander_tail").constant == 0.25);
}

TEST_CASE("later sources override earlier ones") {
  RunConfig cfg = base_config();
  CHECK(cfg.n_paths == 1'000'000);
  CHECK(cfg.effective_levels() == std::vector<int>{128, 256, 512});
  set_key(cfg, "n_steps", "256");
  CHECK(cfg.effective_levels() == std::vector<int>{64, 128, 256});
  set_key(cfg, "alpha", "1.2");
  CHECK(cfg.params().alpha == 1.2);
}

TEST_CASE("required keys and ranges") {
  RunConfig cfg;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = base_config();
  CHECK_NOTHROW(validate(cfg));
  set_key(cfg, "alpha", "2.5");
  CHECK_THROWS_AS(validate(cfg), RejectRange);
  cfg = base_config();
  set_key(cfg, "grid_min", "0");
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = base_config();
  cfg.seed.reset();
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("config hash") {
  RunConfig a = base_config();
  RunConfig b = base_config();
  set_key(b, "out", "/somewhere/else");
  set_key(b, "threads", "7");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  set_key(b, "seed", "6");
  CHECK(config_hash(a) != config_hash(b));
  // canonical text reads back to the same configuration
  RunConfig c;
  apply_entries(c, parse_config_text(canonical_text(a)));
  CHECK(canonical_text(c) == canonical_text(a));
}

TEST_CASE("csv formatting") {
  std::ostringstream out;
  write_csv(out, "note", {{"x", {0.1, 2.0}}, {"y", {1e-300, -3.5}}});
  CHECK(out.str() == "# note\nx,y\n0.1,1e-300\n2,-3.5\n");
  std::string s;
  append_number(s, 1.0 / 3.0);
  CHECK(std::stod(s) == 1.0 / 3.0);
}

TEST_CASE("density command") {
  RunConfig cfg;
  const double c = 1.0 / std::numbers::pi;
  apply_entries(cfg, {{"alpha", "1"},
                      {"seed", "1"},
                      {"grid_min", "0"},
                      {"grid_max", "4"},
                      {"grid_points", "9"},
                      {"grid_spacing", "linear"},
                      {"derivatives", "1"}});
  cfg.c_plus = c;
  cfg.c_minus = c;
  cfg.out = scratch_dir("density").string();
  std::ostringstream log;
  std::ostringstream err;
  REQUIRE(run_command("density", cfg, log, err) == kExitOk);
  std::istringstream csv(slurp(fs::path(cfg.out) / "f.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "# config_hash=" + config_hash(cfg) + " seed=1");
  std::getline(csv, line);
  CHECK(line == "x,f,abs_err,f1,f1_abs_err");
  std::getline(csv, line);
  const double f0 = std::stod(line.substr(line.find(',') + 1));
  CHECK(std::abs(f0 - 1.0 / std::numbers::pi) < 1e-6);
  CHECK(fs::exists(fs::path(cfg.out) / "effective_config.txt"));

  // t = 2: Cauchy at time 2 is 2 X_1, f_2(0) = f(0) / 2
  cfg.horizon = 2.0;
  REQUIRE(run_command("density", cfg, log, err) == kExitOk);
  std::istringstream csv2(slurp(fs::path(cfg.out) / "f.csv"));
  std::getline(csv2, line);
  std::getline(csv2, line);
  std::getline(csv2, line);
  CHECK(std::stod(line.substr(line.find(',') + 1)) ==
        doctest::Approx(0.5 / std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("exit codes") {
  std::ostringstream log;
  std::ostringstream err;
  RunConfig cfg = base_config();
  cfg.out = scratch_dir("exit").string();
  set_key(cfg, "alpha", "2.5");
  CHECK(run_command("density", cfg, log, err) == kExitUsage);
  CHECK(err.str().find("alpha") != std::string::npos);
  CHECK(run_command("fly", base_config(), log, err) == kExitUsage);
  cfg = base_config();
  cfg.out = scratch_dir("exit").string();
  cfg.horizon = 2.0;
  CHECK(run_command("verify", cfg, log, err) == kExitUsage);
}

TEST_CASE("sup, meander and passage commands") {
  RunConfig cfg = base_config();
  apply_entries(cfg, {{"n_paths", "20000"},
                      {"meander_accepted", "3000"},
                      {"n_steps", "128"},
                      {"grid_min", "0.01"},
                      {"grid_max", "100"},
                      {"grid_points", "41"},
                      {"t_points", "31"}});
  cfg.out = scratch_dir("mc").string();
  std::ostringstream log;
  std::ostringstream err;
  REQUIRE(run_command("sup", cfg, log, err) == kExitOk);
  REQUIRE(run_command("meander", cfg, log, err) == kExitOk);
  REQUIRE(run_command("passage", cfg, log, err) == kExitOk);
  const fs::path out(cfg.out);
  for (const char* name :
       {"m.csv", "samples_sup_level32.csv", "samples_sup_level128.csv",
        "ptilde.csv", "p_up.csv", "m_from_ptilde.csv", "meander_summary.csv",
        "samples_meander_level128.csv", "passage.csv"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  CHECK(slurp(out / "m.csv").find("x,m,stderr,level_bias\n") !=
        std::string::npos);
  CHECK(slurp(out / "passage.csv").find("t,h,survival,t_pow_h\n") !=
        std::string::npos);
  CHECK(log.str().find("acceptance rate") != std::string::npos);

  // same config, same bytes
  const std::string first = slurp(out / "m.csv");
  REQUIRE(run_command("sup", cfg, log, err) == kExitOk);
  CHECK(slurp(out / "m.csv") == first);
}

TEST_CASE("verify fails when every tolerance is zero") {
  RunConfig cfg = base_config();
  apply_entries(cfg, {{"n_paths", "100000"}, {"meander_accepted", "10000"}});
  for (const std::string& law : law_ids()) {
    set_key(cfg, "tol." + law + ".exponent", "0");
    set_key(cfg, "tol." + law + ".constant", "0");
  }
  cfg.out = scratch_dir("verify").string();
  std::ostringstream log;
  std::ostringstream err;
  CHECK(run_command("verify", cfg, log, err) == kExitFailure);
  const fs::path out(cfg.out);
  for (const char* name : {"report.csv", "report.txt", "constants.csv",
                           "identities.csv", "f.csv", "passage.csv"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
}
