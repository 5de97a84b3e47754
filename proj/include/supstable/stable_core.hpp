#pragma once

#include <complex>
#include <span>
#include <vector>

#include "supstable/density_table.hpp"
#include "supstable/rng.hpp"
#include "supstable/stable_params.hpp"

namespace supstable {

using ComplexValue = std::complex<double>;

/// psi(theta) with E exp(i theta X_1) = exp(psi(theta)), closed form.
ComplexValue char_exponent(const StableParams& params, double theta);

/// psi(theta) by direct quadrature of the Levy-Khintchine integral of the
/// power-law Levy density (no compensation for alpha < 1, full compensation
/// for alpha > 1). Slow; the reference that char_exponent() is checked
/// against.
ComplexValue char_exponent_quadrature(const StableParams& params, double theta);

/// A Fourier-inversion result with its quadrature error estimate.
struct InversionValue {
  double value = 0.0;
  double abs_err = 0.0;
};

/// Target relative accuracy of every inversion integral.
inline constexpr double kInversionTolerance = 1e-8;

/// f^{(order)}(x) for order in {0, 1, 2}. Throws QuadratureFailure when
/// the estimated error exceeds kInversionTolerance relative to the value,
/// or 1e-13 of the integrand's L1 norm where the value cancels to ~0.
InversionValue invert_density(const StableParams& params, double x,
                              int order = 0);

/// Density of X_1.
double density_f(const StableParams& params, double x);

/// k-th derivative of the density of X_1, k in {1, 2}.
double density_f_derivative(const StableParams& params, double x, int k);

/// P(X_1 > x) with its error estimate.
InversionValue invert_survival(const StableParams& params, double x);

/// P(X_1 > x).
double survival_X1(const StableParams& params, double x);

/// P(X_1 <= x).
double cdf_X1(const StableParams& params, double x);

/// Chambers-Mallows-Stuck generator with the per-parameter constants hoisted.
class StableSampler {
 public:
  explicit StableSampler(const StableParams& params);

  /// One exact draw of X_1 scaled by `scale` (use n^{-eta} for a step of
  /// length 1/n).
  double operator()(PhiloxStream& stream, double scale = 1.0) const;

 private:
  double alpha_;
  bool cauchy_;
  double shift_;      // arctan(beta tan(pi alpha / 2)) / alpha
  double prefactor_;  // (gamma / cos(skew angle))^{1/alpha}
  double inv_alpha_;
  double power_w_;  // (1 - alpha) / alpha
};

/// One exact draw of X_1.
double sample_X1(const StableParams& params, PhiloxStream& stream);

/// Smallest x (on a 2^{1/8} log grid) from which x^{alpha+1} f(x) stays
/// within rel_tol of tail_A over the following decade. Needs c_plus > 0.
double tail_onset(const StableParams& params, double rel_tol = 0.05);

/// f on a grid; errbars carry the quadrature error estimates. Values in
/// [-1e-10, 0) are clamped to 0 and the table is flagged "clamped"; anything
/// more negative is a QuadratureFailure.
DensityTable tabulate_density(const StableParams& params,
                              std::span<const double> grid);

/// f^{(order)} at every grid point.
std::vector<InversionValue> invert_on_grid(const StableParams& params,
                                           std::span<const double> grid,
                                           int order);

/// scale_density() with eta taken from params.
DensityTable scale_density(const DensityTable& table, double t,
                           const StableParams& params);

}  // namespace supstable
