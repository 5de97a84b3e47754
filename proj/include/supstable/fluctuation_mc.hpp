#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "supstable/density_table.hpp"
#include "supstable/stable_params.hpp"

namespace supstable {

struct MCConfig {
  /// Supremum: paths per run. Meander: minimum number of simulated paths.
  std::uint64_t n_paths = 1'000'000;
  /// Meander only: keep simulating until the finest level has this many
  /// accepted paths (0 disables).
  std::uint64_t min_accepted = 0;
  /// Steps per unit time for single-level runs.
  int n_steps = 512;
  std::uint64_t seed = 0;
  /// Skeleton resolutions for extrapolation, each a multiple of the previous.
  std::vector<int> levels{128, 256, 512};
  std::string kde_bandwidth_rule = "silverman-log";
  /// Time horizon t of the simulated path.
  double horizon = 1.0;
  /// Worker threads; 0 means std::thread::hardware_concurrency(). Results do
  /// not depend on this.
  unsigned threads = 0;
};

/// Throws ConfigError when the invariants of MCConfig fail.
void check_config(const MCConfig& cfg);

struct MCRun {
  /// Supremum draws (>= 0) or accepted meander endpoints (> 0).
  std::vector<double> samples;
  /// Supremum runs: X_t of the same paths, index-aligned with samples.
  std::vector<double> endpoints;
  /// Meander runs: accepted / attempted. 1 for supremum runs.
  double acceptance_rate = 1.0;
  std::uint64_t attempted = 0;
  MCConfig config;
  int level = 0;
  /// Size of one skeleton step in process units, (horizon / level)^{eta}.
  double mesh_scale = 0.0;
  bool meander = false;
};

/// Discrete-time supremum of the skeleton with cfg.n_steps steps per unit
/// time over [0, cfg.horizon].
MCRun simulate_supremum(const StableParams& params, const MCConfig& cfg);

/// One supremum run per entry of cfg.levels, all read off the same paths
/// simulated at the finest level.
std::vector<MCRun> simulate_supremum_levels(const StableParams& params,
                                            const MCConfig& cfg);

/// Endpoints of skeleton paths whose partial sums stay strictly positive,
/// with cfg.n_steps steps. Throws RejectionStarvation below 1e-4 acceptance.
MCRun simulate_meander(const StableParams& params, const MCConfig& cfg);

/// Coupled meander runs, one per level (acceptance is judged per level on
/// the same finest-level paths).
std::vector<MCRun> simulate_meander_levels(const StableParams& params,
                                           const MCConfig& cfg);

/// CSV rows "value,level,seed" for every sample of every run.
void write_runs_csv(std::ostream& out, std::span<const MCRun> runs);

/// Log-domain Gaussian kernel density estimate of the positive samples,
/// normalised by the total sample count (an atom at 0 keeps its mass).
/// bandwidth <= 0 picks the rule from run.config.
DensityTable estimate_density(const MCRun& run, std::span<const double> grid,
                              double bandwidth = 0.0);

/// Bandwidth (on the log scale) selected for the positive samples of a run.
double log_bandwidth(const MCRun& run);

struct Extrapolation {
  DensityTable table;
  /// Fitted bias exponent: level differences shrink like n^{-delta}.
  double delta = 0.0;
  /// Weight of the last level difference: value = finest + gain * (finest -
  /// previous).
  double gain = 0.0;
  /// Per grid point: fell back to the finest level.
  std::vector<bool> fallback;
  /// Per grid point: extrapolated minus finest-level value.
  std::vector<double> level_bias;
};

/// Richardson-type extrapolation in n^{-delta} over the last three level
/// tables (coarse to fine, resolutions[i] steps for levels[i]). Points whose
/// level sequence is not monotone keep the finest value and are flagged
/// "nonmonotone-bias" in the table meta. delta is the median pointwise rate
/// over points beyond 10 coarsest-level steps (all monotone points if there
/// are none); points within 2 coarsest-level steps of the origin keep the
/// finest value and flag "boundary-layer". NonMonotoneBias is thrown only
/// when no point moves monotonically.
Extrapolation extrapolate_levels(std::span<const DensityTable> levels,
                                 std::span<const int> resolutions);

/// Estimates every level and extrapolates. All levels share the finest
/// level's bandwidth; error bars account for the coupling of the levels
/// through shared paths.
Extrapolation extrapolate_levels(std::span<const MCRun> runs,
                                 std::span<const double> grid);

/// Normalised x^{alpha(1-rho)} weighting of a meander table. Throws
/// NonNormalizable when the weighted table cannot be normalised.
DensityTable estimate_p_up(const StableParams& params,
                           const DensityTable& ptilde);

}  // namespace supstable
