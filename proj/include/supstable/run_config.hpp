#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "supstable/asymptotics.hpp"
#include "supstable/density_table.hpp"
#include "supstable/fluctuation_mc.hpp"
#include "supstable/stable_params.hpp"

namespace supstable {

/// Everything a command needs. Built from defaults, then a `key = value`
/// file, then command-line overrides; see config_keys() for the key list.
struct RunConfig {
  // process; no defaults
  std::optional<double> alpha;
  std::optional<double> c_plus;
  std::optional<double> c_minus;
  std::optional<std::uint64_t> seed;

  // Monte Carlo
  std::uint64_t n_paths = 1'000'000;
  std::uint64_t meander_accepted = 100'000;
  int n_steps = 512;
  /// Empty: n_steps / 4, n_steps / 2, n_steps.
  std::vector<int> levels;
  std::string bandwidth = "silverman-log";
  unsigned threads = 0;

  // x grid
  double grid_min = 1e-3;
  double grid_max = 1e3;
  std::size_t grid_points = 121;
  GridSpacing grid_spacing = GridSpacing::log;

  double horizon = 1.0;
  double passage_x = 2.0;
  // passage time grid (always log spaced)
  double t_min = 1e-3;
  double t_max = 1e3;
  std::size_t t_points = 121;

  /// Highest derivative of f written by the density command (0, 1 or 2).
  int derivatives = 0;
  /// Meander command: also write the x^{alpha(1-rho)}-weighted table.
  bool p_up = true;
  /// Sup and meander commands: write the raw samples of every level.
  bool write_samples = true;

  std::string out = ".";
  std::string format = "csv";

  /// Per-law overrides, keys tol.<law>.exponent and tol.<law>.constant.
  std::map<std::string, Tolerance> tolerances;

  /// Throws ConfigError (missing keys) or a parameter rejection.
  StableParams params() const;
  MCConfig mc() const;
  std::vector<int> effective_levels() const;
  std::vector<double> grid() const;
  std::vector<double> t_grid() const;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Names accepted by set_key(), apart from the tol.<law>.* family.
const std::vector<std::string>& config_keys();

/// Parses the text of a config file: one `key = value` per line, `#`
/// starts a comment. Throws ConfigError naming the offending line.
ConfigEntries parse_config_text(const std::string& text);
ConfigEntries read_config_file(const std::string& path);

/// Throws ConfigError for unknown keys and unparseable values.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_entries(RunConfig& cfg, const ConfigEntries& entries);

/// Checks ranges and required keys; throws ConfigError, RejectRange,
/// RejectSubordinator or RejectAsymmetricCauchy.
void validate(const RunConfig& cfg);

/// Effective configuration in a fixed key order. `out` and `threads` are
/// left out: they do not change any result.
ConfigEntries canonical_entries(const RunConfig& cfg);
std::string canonical_text(const RunConfig& cfg);

/// 64-bit FNV-1a of canonical_text(), as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace supstable
