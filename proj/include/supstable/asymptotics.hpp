#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "supstable/density_table.hpp"
#include "supstable/stable_params.hpp"

namespace supstable {

enum class Side { zero, infinity };
enum class FitMethod { ols_loglog, hill };

const char* to_string(Side side);
const char* to_string(FitMethod method);

struct TailFit {
  double exponent = 0.0;
  double constant = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double stderr_exponent = 0.0;
  double stderr_constant = 0.0;
  FitMethod method = FitMethod::ols_loglog;
  std::size_t points = 0;
};

struct WindowPolicy {
  enum class Kind { automatic, explicit_window };
  Kind kind = Kind::automatic;
  double lo = 0.0;
  double hi = 0.0;

  static WindowPolicy automatic() { return {}; }
  static WindowPolicy between(double lo, double hi) {
    return {Kind::explicit_window, lo, hi};
  }
};

/// Points whose relative error bar exceeds this are excluded from fits and
/// from automatic windows.
inline constexpr double kMaxFitRelErr = 0.25;

/// Window chosen by the automatic policy for a table. Only reliable points
/// (positive, relative error below kMaxFitRelErr) at least kSkeletonFloor
/// skeleton steps (meta.resolution) above the origin qualify:
///  - infinity: the decade ending at the last qualifying grid point;
///  - zero: the decade starting at the first one.
/// Throws WindowTooNarrow when the table cannot host such a decade.
std::pair<double, double> automatic_window(const DensityTable& table,
                                           Side side);

/// OLS of log y on log x over the window. Error bars, when present, only
/// exclude unreliable points. Needs at least 3 points spanning a decade;
/// throws WindowTooNarrow otherwise.
TailFit fit_power_law(const DensityTable& table, Side side,
                      WindowPolicy policy = WindowPolicy::automatic());

/// Hill estimator on the upper order statistics of positive samples
/// (infinity side only). The fitted exponent is that of the survival
/// function, -alpha_hat, with P(X > x) ~ constant x^{exponent}. The
/// automatic window is [q_0.99, q_0.9999] of the sample.
TailFit fit_power_law(std::span<const double> samples, Side side,
                      WindowPolicy policy = WindowPolicy::automatic());

/// Prefactor c of c x^exponent with the exponent held fixed, from the
/// table points inside [lo, hi]: the geometric mean of y x^{-exponent}.
struct PinnedConstant {
  double constant = 0.0;
  double stderr_constant = 0.0;
};
PinnedConstant pinned_constant(const DensityTable& table, double exponent,
                               double lo, double hi);

enum class Verdict { pass, fail, skipped };
const char* to_string(Verdict verdict);

/// Base tolerances. A verdict widens them by twice the fit's standard
/// error, added in quadrature.
struct Tolerance {
  double exponent = 0.15;  ///< absolute
  double constant = 0.20;  ///< relative
};

struct ReportEntry {
  std::string law;
  std::string description;
  double predicted_exponent = 0.0;
  std::optional<double> predicted_constant;
  TailFit fit;
  /// Prefactor with the exponent pinned at the prediction; this is the
  /// value compared with predicted_constant.
  double measured_constant = 0.0;
  double measured_constant_stderr = 0.0;
  Verdict verdict = Verdict::skipped;
  std::string reason;
  Tolerance tolerance;

  double effective_exponent_tolerance() const;
  double effective_constant_tolerance() const;
};

struct AsymptoticReport {
  std::vector<ReportEntry> entries;

  const ReportEntry* find(const std::string& law) const;
  bool any_failed() const;
};

/// Every law id, in report order.
const std::vector<std::string>& law_ids();

/// Laws that need positive jumps and are skipped when c_plus = 0.
bool needs_positive_jumps(const std::string& law);

/// Default tolerance of a law.
Tolerance default_tolerance(const std::string& law);

/// Monte Carlo (or quadrature) tables under one parameter set. f and f'
/// come from stable_core; the passage density is the pointwise image of m.
struct Artifacts {
  DensityTable m;       ///< supremum density
  DensityTable ptilde;  ///< meander density
  DensityTable p_up;    ///< conditioned-to-stay-positive density
  /// Passage level of the h_x laws.
  double passage_x = 2.0;
};

struct VerifyOptions {
  /// Per-law tolerance overrides.
  std::map<std::string, Tolerance> tolerances;
};

/// One entry per law id. Fitting problems become failed verdicts. The
/// measured constant of each entry is the prefactor with the exponent
/// pinned at its prediction.
AsymptoticReport verify_all(const StableParams& params,
                            const Artifacts& artifacts,
                            const VerifyOptions& options = {});

struct ConstantEstimate {
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct MeasuredConstants {
  std::optional<ConstantEstimate> A;  ///< m tail
  std::optional<ConstantEstimate> B;  ///< m at zero
  std::optional<ConstantEstimate> C;  ///< meander density at zero
  std::optional<ConstantEstimate> D;  ///< f(0+)
  /// B from the distribution-function law, for the consistency check.
  std::optional<ConstantEstimate> B_from_cdf;
  /// A_meas / c_plus.
  double A_ratio = 0.0;
};

/// 95% intervals from the passing entries; constants whose law did not
/// pass stay empty. Throws MissingLaw when one of `required` ("A", "B",
/// "C", "D") is unavailable.
MeasuredConstants estimate_constants(
    const AsymptoticReport& report, const StableParams& params,
    std::span<const std::string> required = {});

void write_report_csv(std::ostream& out, const AsymptoticReport& report);
void write_report_text(std::ostream& out, const AsymptoticReport& report);

}  // namespace supstable
