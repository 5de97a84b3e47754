#pragma once

#include <string>
#include <vector>

#include "supstable/density_table.hpp"
#include "supstable/stable_params.hpp"

namespace supstable {

/// A density on (0, inf) backed by a table: power-law (log-log linear)
/// interpolation between knots, linear where a knot value is 0, and
/// power-law extensions c x^p beyond both ends, continuous at the edges.
class DensityFn {
 public:
  DensityFn(DensityTable table, double left_exponent, double right_exponent);

  double operator()(double x) const;

  /// Integral over (0, x]. Throws NonNormalizable when the left extension
  /// is not integrable at 0.
  double cdf(double x) const;
  /// Total mass; throws NonNormalizable when either extension diverges.
  double mass() const;
  /// Same function divided by mass().
  DensityFn normalized() const;

  const DensityTable& table() const { return table_; }
  double left_exponent() const { return left_exponent_; }
  double right_exponent() const { return right_exponent_; }

 private:
  double segment_integral(std::size_t j, double b) const;
  double left_tail(double x) const;

  DensityTable table_;
  double left_exponent_;
  double right_exponent_;
  std::vector<double> cumulative_;  // integral over [grid[0], grid[j]]
};

/// Builds a DensityFn from a (possibly noisy) table. Tables with error
/// bars are first cut to the contiguous stretch around the mode whose
/// relative error stays below 25%. Edge exponents come from a log-log fit
/// of the outermost knots when it is tight (stderr <= 0.05) and otherwise
/// fall back to the supplied theoretical values; fallbacks are recorded in
/// the table flags as "fallback-left" / "fallback-right".
DensityFn make_density_fn(const DensityTable& table, double theory_left,
                          double theory_right);

/// p~ evaluator with the meander's theoretical edge exponents
/// (alpha rho at 0, -(alpha + 1) at infinity).
DensityFn meander_density_fn(const DensityTable& ptilde,
                             const StableParams& params);

/// m evaluator with the supremum's theoretical edge exponents
/// (alpha rho - 1 at 0, -(alpha + 1) at infinity).
DensityFn supremum_density_fn(const DensityTable& m,
                              const StableParams& params);

/// Relative error target of both convolution quadratures.
inline constexpr double kConvolutionTolerance = 1e-9;

/// m(x) from the meander density through the integral over s in (0, 1) with
/// the Beta(rho, 1 - rho) weight, by composite Gauss-Jacobi quadrature.
double m_from_ptilde_beta(const DensityFn& ptilde, const StableParams& params,
                          double x);

/// m(x) from the meander density through the integral over y > x against
/// (y^alpha - x^alpha)^{-rho}, by substitution and adaptive quadrature.
double m_from_ptilde_z(const DensityFn& ptilde, const StableParams& params,
                       double x);

/// m on a grid (Gauss-Jacobi route) as a quadrature-provenance table.
DensityTable m_table_from_ptilde(const DensityFn& ptilde,
                                 const StableParams& params,
                                 const std::vector<double>& grid);

/// First-passage density of level x at time t.
double passage_density(const DensityFn& m, const StableParams& params, double x,
                       double t);

/// P(tau_x > t) = P(S_t <= x) = integral of m over (0, x t^{-eta}].
double passage_survival(const DensityFn& m, const StableParams& params,
                        double x, double t);
double passage_survival(const DensityTable& m_table, const StableParams& params,
                        double x, double t);

/// Integral of passage_density(m, params, x, .) over t in (0, inf).
double passage_total_mass(const DensityFn& m, const StableParams& params,
                          double x);

/// alpha f(x): the exact supremum density without positive jumps. Throws
/// WrongRegime when c_plus > 0.
double spectrally_negative_m(const StableParams& params, double x);

}  // namespace supstable
