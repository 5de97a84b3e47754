#include "supstable/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "supstable/csv.hpp"
#include "supstable/errors.hpp"

namespace supstable {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw ConfigError("key '" + key + "': cannot read '" + value + "' as " +
                    expected);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || end != v.data() + v.size() || !std::isfinite(x)) {
    bad_value(key, v, "a finite number");
  }
  return x;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& v) {
  Int x = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || end != v.data() + v.size()) {
    bad_value(key, v, "a nonnegative integer");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no" || v == "off") {
    return false;
  }
  bad_value(key, v, "a boolean");
}

std::vector<int> to_levels(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_integer<int>(key, trim(item)));
  }
  if (out.empty()) {
    bad_value(key, v, "a comma-separated list of step counts");
  }
  return out;
}

std::string number(double v) {
  std::string s;
  append_number(s, v);
  return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "alpha",       "c_plus",
      "c_minus",     "seed",
      "n_paths",     "meander_accepted",
      "n_steps",     "levels",
      "bandwidth",   "threads",
      "grid_min",    "grid_max",
      "grid_points", "grid_spacing",
      "t",           "x",
      "t_min",       "t_max",
      "t_points",    "derivatives",
      "p_up",        "write_samples",
      "out",         "format"};
  return keys;
}

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries entries;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config_text(buf.str());
  } catch (const ConfigError& err) {
    throw ConfigError(path + ": " + err.what());
  }
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& v) {
  if (key.rfind("tol.", 0) == 0) {
    const auto dot = key.rfind('.');
    const std::string law = key.substr(4, dot - 4);
    const std::string part = key.substr(dot + 1);
    const auto& ids = law_ids();
    if (dot <= 4 || std::find(ids.begin(), ids.end(), law) == ids.end() ||
        (part != "exponent" && part != "constant")) {
      throw ConfigError("unknown key '" + key + "'");
    }
    auto [it, fresh] = cfg.tolerances.try_emplace(law, default_tolerance(law));
    const double tol = to_double(key, v);
    if (tol < 0.0) {
      throw ConfigError("key '" + key + "' must be nonnegative");
    }
    (part == "exponent" ? it->second.exponent : it->second.constant) = tol;
    return;
  }
  if (key == "alpha") {
    cfg.alpha = to_double(key, v);
  } else if (key == "c_plus") {
    cfg.c_plus = to_double(key, v);
  } else if (key == "c_minus") {
    cfg.c_minus = to_double(key, v);
  } else if (key == "seed") {
    cfg.seed = to_integer<std::uint64_t>(key, v);
  } else if (key == "n_paths") {
    cfg.n_paths = to_integer<std::uint64_t>(key, v);
  } else if (key == "meander_accepted") {
    cfg.meander_accepted = to_integer<std::uint64_t>(key, v);
  } else if (key == "n_steps") {
    cfg.n_steps = to_integer<int>(key, v);
  } else if (key == "levels") {
    cfg.levels = to_levels(key, v);
  } else if (key == "bandwidth") {
    cfg.bandwidth = v;
  } else if (key == "threads") {
    cfg.threads = to_integer<unsigned>(key, v);
  } else if (key == "grid_min") {
    cfg.grid_min = to_double(key, v);
  } else if (key == "grid_max") {
    cfg.grid_max = to_double(key, v);
  } else if (key == "grid_points") {
    cfg.grid_points = to_integer<std::size_t>(key, v);
  } else if (key == "grid_spacing") {
    if (v == "log") {
      cfg.grid_spacing = GridSpacing::log;
    } else if (v == "linear") {
      cfg.grid_spacing = GridSpacing::linear;
    } else {
      bad_value(key, v, "'log' or 'linear'");
    }
  } else if (key == "t") {
    cfg.horizon = to_double(key, v);
  } else if (key == "x") {
    cfg.passage_x = to_double(key, v);
  } else if (key == "t_min") {
    cfg.t_min = to_double(key, v);
  } else if (key == "t_max") {
    cfg.t_max = to_double(key, v);
  } else if (key == "t_points") {
    cfg.t_points = to_integer<std::size_t>(key, v);
  } else if (key == "derivatives") {
    cfg.derivatives = to_integer<int>(key, v);
  } else if (key == "p_up") {
    cfg.p_up = to_bool(key, v);
  } else if (key == "write_samples") {
    cfg.write_samples = to_bool(key, v);
  } else if (key == "out") {
    cfg.out = v;
  } else if (key == "format") {
    cfg.format = v;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void apply_entries(RunConfig& cfg, const ConfigEntries& entries) {
  for (const auto& [key, value] : entries) {
    set_key(cfg, key, value);
  }
}

StableParams RunConfig::params() const {
  for (const auto& [name, slot] :
       {std::pair{"alpha", &alpha}, std::pair{"c_plus", &c_plus},
        std::pair{"c_minus", &c_minus}}) {
    if (!*slot) {
      throw ConfigError(std::string("missing required key '") + name + "'");
    }
  }
  return validate_params(*alpha, *c_plus, *c_minus);
}

std::vector<int> RunConfig::effective_levels() const {
  if (!levels.empty()) {
    return levels;
  }
  return {n_steps / 4, n_steps / 2, n_steps};
}

MCConfig RunConfig::mc() const {
  if (!seed) {
    throw ConfigError("missing required key 'seed'");
  }
  MCConfig mc;
  mc.n_paths = n_paths;
  mc.n_steps = n_steps;
  mc.seed = *seed;
  mc.levels = effective_levels();
  mc.kde_bandwidth_rule = bandwidth;
  mc.horizon = horizon;
  mc.threads = threads;
  return mc;
}

std::vector<double> RunConfig::grid() const {
  return make_grid(grid_min, grid_max, grid_points, grid_spacing);
}

std::vector<double> RunConfig::t_grid() const {
  return make_grid(t_min, t_max, t_points, GridSpacing::log);
}

void validate(const RunConfig& cfg) {
  cfg.params();
  check_config(cfg.mc());
  if (cfg.n_steps % 4 != 0 && cfg.levels.empty()) {
    throw ConfigError("n_steps must be a multiple of 4 when levels is unset");
  }
  if (cfg.effective_levels().size() < 3) {
    throw ConfigError("levels needs at least three step counts");
  }
  if (!(cfg.grid_max > cfg.grid_min) || cfg.grid_points < 2) {
    throw ConfigError("grid needs grid_min < grid_max and 2+ points");
  }
  if (cfg.grid_spacing == GridSpacing::log && !(cfg.grid_min > 0.0)) {
    throw ConfigError("a log grid needs grid_min > 0");
  }
  if (!(cfg.horizon > 0.0)) {
    throw ConfigError("t must be positive");
  }
  if (!(cfg.passage_x > 0.0)) {
    throw ConfigError("x must be positive");
  }
  if (!(cfg.t_min > 0.0) || !(cfg.t_max > cfg.t_min) || cfg.t_points < 2) {
    throw ConfigError("passage grid needs 0 < t_min < t_max and 2+ points");
  }
  if (cfg.derivatives < 0 || cfg.derivatives > 2) {
    throw ConfigError("derivatives must be 0, 1 or 2");
  }
  if (cfg.format != "csv") {
    throw ConfigError("format must be 'csv'");
  }
  if (cfg.bandwidth != "silverman-log" && cfg.bandwidth != "scott-log") {
    throw ConfigError("bandwidth must be 'silverman-log' or 'scott-log'");
  }
}

ConfigEntries canonical_entries(const RunConfig& cfg) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? number(*v) : std::string();
  };
  std::string levels;
  for (const int n : cfg.effective_levels()) {
    levels += (levels.empty() ? "" : ",") + std::to_string(n);
  }
  ConfigEntries e = {
      {"alpha", opt(cfg.alpha)},
      {"c_plus", opt(cfg.c_plus)},
      {"c_minus", opt(cfg.c_minus)},
      {"seed", cfg.seed ? std::to_string(*cfg.seed) : std::string()},
      {"n_paths", std::to_string(cfg.n_paths)},
      {"meander_accepted", std::to_string(cfg.meander_accepted)},
      {"n_steps", std::to_string(cfg.n_steps)},
      {"levels", levels},
      {"bandwidth", cfg.bandwidth},
      {"grid_min", number(cfg.grid_min)},
      {"grid_max", number(cfg.grid_max)},
      {"grid_points", std::to_string(cfg.grid_points)},
      {"grid_spacing", cfg.grid_spacing == GridSpacing::log ? "log" : "linear"},
      {"t", number(cfg.horizon)},
      {"x", number(cfg.passage_x)},
      {"t_min", number(cfg.t_min)},
      {"t_max", number(cfg.t_max)},
      {"t_points", std::to_string(cfg.t_points)},
      {"derivatives", std::to_string(cfg.derivatives)},
      {"p_up", cfg.p_up ? "true" : "false"},
      {"write_samples", cfg.write_samples ? "true" : "false"},
      {"format", cfg.format},
  };
  for (const auto& [law, tol] : cfg.tolerances) {
    e.emplace_back("tol." + law + ".exponent", number(tol.exponent));
    e.emplace_back("tol." + law + ".constant", number(tol.constant));
  }
  return e;
}

std::string canonical_text(const RunConfig& cfg) {
  std::string text;
  for (const auto& [key, value] : canonical_entries(cfg)) {
    text += key + " = " + value + "\n";
  }
  return text;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : canonical_text(cfg)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace supstable
