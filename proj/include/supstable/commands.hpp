#pragma once

#include <iosfwd>
#include <string>

#include "supstable/run_config.hpp"

namespace supstable {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< numeric or verification failure
inline constexpr int kExitUsage = 2;    ///< usage or configuration error

/// Each command validates the config, writes its CSV files into cfg.out
/// (created if needed) together with effective_config.txt, and reports
/// progress on `log`. Every CSV starts with "# config_hash=<hex> seed=<n>".
/// Errors propagate as exceptions; run_command() maps them to exit codes.

/// f.csv: x, f, abs_err (plus f1/f2 columns per cfg.derivatives) for the
/// density of X_t, t = cfg.horizon.
int cmd_density(const RunConfig& cfg, std::ostream& log);

/// m.csv: x, m, stderr, level_bias for the supremum over [0, t], and
/// samples_sup_level<n>.csv per level when cfg.write_samples.
int cmd_sup(const RunConfig& cfg, std::ostream& log);

/// ptilde.csv, m_from_ptilde.csv, meander_summary.csv, p_up.csv when
/// cfg.p_up, and samples_meander_level<n>.csv when cfg.write_samples.
int cmd_meander(const RunConfig& cfg, std::ostream& log);

/// passage.csv: t, h, survival, t_pow_h = t^{rho+1} h for level cfg.x, from
/// a simulated supremum density.
int cmd_passage(const RunConfig& cfg, std::ostream& log);

/// Full pipeline; writes the tables, identities.csv, report.csv,
/// report.txt and constants.csv. Returns kExitFailure when a law fails.
int cmd_verify(const RunConfig& cfg, std::ostream& log);

/// Runs the named command ("density", "sup", "meander", "passage",
/// "verify"), printing errors on `err`.
int run_command(const std::string& name, const RunConfig& cfg,
                std::ostream& log, std::ostream& err);

}  // namespace supstable
