#include "supstable/stable_core.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "supstable/errors.hpp"

namespace supstable {
namespace {

using std::numbers::pi;
using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Levy-Khintchine constants by quadrature.
//
// For theta > 0 the exponent is theta^alpha [(c+ + c-) Ic + i (c+ - c-) Is]
// with Ic = int_0^inf (cos u - 1) u^{-alpha-1} du and
// Is = int_0^inf (sin u - u 1{alpha > 1}) u^{-alpha-1} du.
// [0, 1] is done by termwise integration of the Taylor series, [1, U] by
// Gauss-Legendre panels and [U, inf) by the asymptotic expansion of
// int_U^inf e^{iu} u^{-s} du.

double series_cos_part(double alpha) {
  double sum = 0.0;
  double factorial = 1.0;  // (2k)!
  for (int k = 1; k < 40; ++k) {
    factorial *= (2.0 * k - 1.0) * (2.0 * k);
    const double term = 1.0 / (factorial * (2.0 * k - alpha));
    sum += (k % 2 == 1) ? -term : term;
    if (term < 1e-18) {
      break;
    }
  }
  return sum;
}

double series_sin_part(double alpha) {
  // sum over odd powers 2k+1, skipping k = 0 when alpha > 1 (compensated).
  double sum = 0.0;
  double factorial = 1.0;  // (2k+1)!
  for (int k = 0; k < 40; ++k) {
    if (k > 0) {
      factorial *= (2.0 * k) * (2.0 * k + 1.0);
    }
    if (k == 0 && alpha > 1.0) {
      continue;
    }
    const double term = 1.0 / (factorial * (2.0 * k + 1.0 - alpha));
    sum += (k % 2 == 1) ? -term : term;
    if (std::abs(term) < 1e-18) {
      break;
    }
  }
  return sum;
}

// int_1^inf e^{iu} u^{-s} du.
Complex oscillatory_tail(double s) {
  constexpr int kPanelsPerPeriod = 8;
  constexpr int kPeriods = 100;
  const double upper = 2.0 * pi * kPeriods;
  const double width = 2.0 * pi / kPanelsPerPeriod;
  using Rule = boost::math::quadrature::gauss<double, 20>;

  double re = 0.0;
  double im = 0.0;
  double a = 1.0;
  while (a < upper) {
    const double b = std::min(a + width, upper);
    re += Rule::integrate(
        [s](double u) { return std::cos(u) * std::pow(u, -s); }, a, b);
    im += Rule::integrate(
        [s](double u) { return std::sin(u) * std::pow(u, -s); }, a, b);
    a = b;
  }

  // i e^{iU} U^{-s} sum_k (-i)^k (s)_k U^{-k}
  Complex series = 0.0;
  Complex factor = 1.0;
  for (int k = 0; k < 12; ++k) {
    series += factor;
    factor *= Complex(0.0, -1.0) * (s + k) / upper;
  }
  const Complex tail =
      Complex(0.0, 1.0) * std::polar(std::pow(upper, -s), upper) * series;
  return Complex(re, im) + tail;
}

// ---------------------------------------------------------------------------
// Fourier inversion along a ray theta = r e^{-i phi0} in the lower half
// plane. The exponent continues analytically as psi(theta) =
// -(gamma - i omega) theta^alpha, which decays on the ray as long as
// skew_angle + alpha phi0 < pi/2; e^{-i theta x} decays for x > 0.

struct Ray {
  double phi0 = 0.0;
  double sin0 = 0.0;
  double cos0 = 0.0;
  Complex dir;         // e^{-i phi0}
  Complex kappa;       // (gamma - i omega) e^{-i alpha phi0}
  double r_scale = 0;  // |gamma - i omega|^{-1/alpha}
  double alpha = 0;
};

Ray make_ray(const StableParams& p) {
  Ray ray;
  ray.alpha = p.alpha;
  const double phi_max =
      std::min(pi / 2.0, (pi / 2.0 - p.skew_angle) / p.alpha);
  ray.phi0 = 0.6 * phi_max;
  ray.sin0 = std::sin(ray.phi0);
  ray.cos0 = std::cos(ray.phi0);
  ray.dir = std::polar(1.0, -ray.phi0);
  const double modulus = p.scale_gamma / std::cos(p.skew_angle);
  ray.kappa = std::polar(modulus, -(p.skew_angle + p.alpha * ray.phi0));
  ray.r_scale = std::pow(modulus, -1.0 / p.alpha);
  return ray;
}

Complex expm1(Complex z) {
  const double a = z.real();
  const double b = z.imag();
  const double s = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * s * s, std::exp(a) * std::sin(b)};
}

struct Accumulated {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

// Integrates g over [0, upper] on geometric panels [b/2, b], halving until
// the panels are negligible. What is left, [0, a], usually carries an
// integrable power singularity that defeats the Kronrod error estimate; it is
// summed as the geometric series continuing the last two panels and its
// whole magnitude is booked as error.
Accumulated integrate_geometric(const std::function<double(double)>& g,
                                double upper) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr int kMinPanels = 8;
  constexpr int kMaxPanels = 400;
  Accumulated acc;
  double b = upper;
  double last_l1 = 0.0;
  double last_v = 0.0;
  double prev_l1 = 0.0;
  for (int j = 0; j < kMaxPanels; ++j) {
    const double a = b * 0.5;
    double err = 0.0;
    double l1 = 0.0;
    // unit-scale variable keeps the rule's roundoff floor relative
    const auto h = [&g, b](double u) { return b * g(b * u); };
    const double v = Rule::integrate(h, 0.5, 1.0, 6, 1e-11, &err, &l1);
    acc.value += v;
    acc.error += err;
    acc.l1 += l1;
    prev_l1 = last_l1;
    last_l1 = l1;
    last_v = v;
    b = a;
    if (j >= kMinPanels && l1 <= 1e-13 * acc.l1) {
      break;
    }
  }
  const double ratio = prev_l1 > 0.0 ? last_l1 / prev_l1 : 0.0;
  if (ratio < 0.9) {
    const double rest = last_v * ratio / (1.0 - ratio);
    acc.value += rest;
    acc.error += std::abs(rest);
  } else {
    acc.error += acc.l1;  // not converging towards 0: report failure
  }
  return acc;
}

void check_accuracy(const Accumulated& acc, double value, const char* what,
                    double x) {
  const double allowed =
      kInversionTolerance * std::abs(value) + 1e-13 * acc.l1 + 1e-300;
  if (!(acc.error <= allowed) || !std::isfinite(value)) {
    throw QuadratureFailure(std::string(what) +
                            " inversion missed its error "
                            "target at x = " +
                            std::to_string(x));
  }
}

InversionValue density_nonnegative_x(const StableParams& p, double x,
                                     int order) {
  const Ray ray = make_ray(p);
  const bool subtract = x * ray.r_scale >= 1.0;
  const double decay = ray.kappa.real();
  const double upper = subtract ? 45.0 / (x * ray.sin0)
                                : std::pow(50.0 / decay, 1.0 / p.alpha) * 1.05;

  auto g = [&](double r) {
    const Complex theta = r * ray.dir;
    const Complex z = -ray.kappa * std::pow(r, p.alpha);
    const Complex e = subtract ? expm1(z) : std::exp(z);
    Complex w = 1.0;
    for (int k = 0; k < order; ++k) {
      w *= Complex(0.0, -1.0) * theta;
    }
    const Complex phase(-x * r * ray.sin0, -x * r * ray.cos0);
    return (ray.dir * w * std::exp(phase) * e).real();
  };
  const Accumulated acc = integrate_geometric(g, upper);
  InversionValue out{acc.value / pi, acc.error / pi};
  check_accuracy(acc, acc.value, "density", x);
  return out;
}

InversionValue survival_nonnegative_x(const StableParams& p, double x) {
  const Ray ray = make_ray(p);
  if (x * ray.r_scale >= 1.0) {
    // (1/pi) Re int_ray e^{-i theta x} (phi - 1) / (i theta) d theta
    const double upper = 45.0 / (x * ray.sin0);
    auto g = [&](double r) {
      const Complex theta = r * ray.dir;
      const Complex e = expm1(-ray.kappa * std::pow(r, p.alpha));
      const Complex phase(-x * r * ray.sin0, -x * r * ray.cos0);
      return (ray.dir * std::exp(phase) * e / (Complex(0.0, 1.0) * theta))
          .real();
    };
    const Accumulated acc = integrate_geometric(g, upper);
    check_accuracy(acc, acc.value, "survival", x);
    return {acc.value / pi, acc.error / pi};
  }
  // Gil-Pelaez on the real axis: 1/2 + (1/pi) int Im[e^{-i theta x} phi] /
  // theta
  const double upper = std::pow(50.0 / p.scale_gamma, 1.0 / p.alpha) * 1.05;
  auto g = [&](double t) {
    const double ta = std::pow(t, p.alpha);
    return std::exp(-p.scale_gamma * ta) * std::sin(p.skew_omega * ta - t * x) /
           t;
  };
  const Accumulated acc = integrate_geometric(g, upper);
  const double value = 0.5 + acc.value / pi;
  check_accuracy(acc, value, "survival", x);
  return {value, acc.error / pi};
}

}  // namespace

ComplexValue char_exponent(const StableParams& params, double theta) {
  if (theta == 0.0) {
    return {0.0, 0.0};
  }
  const double mag = std::pow(std::abs(theta), params.alpha);
  const double sign = theta > 0.0 ? 1.0 : -1.0;
  return {-params.scale_gamma * mag, sign * params.skew_omega * mag};
}

ComplexValue char_exponent_quadrature(const StableParams& params,
                                      double theta) {
  if (theta == 0.0) {
    return {0.0, 0.0};
  }
  const double alpha = params.alpha;
  const Complex tail = oscillatory_tail(alpha + 1.0);
  const double cos_part = series_cos_part(alpha) + tail.real() - 1.0 / alpha;
  double sin_part = 0.0;
  if (params.c_plus != params.c_minus) {
    // alpha == 1 only occurs with c_plus == c_minus.
    sin_part = series_sin_part(alpha) + tail.imag();
    if (alpha > 1.0) {
      sin_part -= 1.0 / (alpha - 1.0);
    }
  }
  const double mag = std::pow(std::abs(theta), alpha);
  const double sign = theta > 0.0 ? 1.0 : -1.0;
  return {mag * (params.c_plus + params.c_minus) * cos_part,
          sign * mag * (params.c_plus - params.c_minus) * sin_part};
}

InversionValue invert_density(const StableParams& params, double x, int order) {
  if (order < 0 || order > 2) {
    throw std::invalid_argument("derivative order must be 0, 1 or 2");
  }
  if (x >= 0.0) {
    return density_nonnegative_x(params, x, order);
  }
  // f_X^{(k)}(x) = (-1)^k f_{-X}^{(k)}(-x)
  InversionValue r = density_nonnegative_x(reflect(params), -x, order);
  if (order % 2 == 1) {
    r.value = -r.value;
  }
  return r;
}

double density_f(const StableParams& params, double x) {
  return invert_density(params, x, 0).value;
}

double density_f_derivative(const StableParams& params, double x, int k) {
  if (k != 1 && k != 2) {
    throw std::invalid_argument("derivative order must be 1 or 2");
  }
  return invert_density(params, x, k).value;
}

InversionValue invert_survival(const StableParams& params, double x) {
  if (x >= 0.0) {
    return survival_nonnegative_x(params, x);
  }
  InversionValue r = survival_nonnegative_x(reflect(params), -x);
  r.value = 1.0 - r.value;
  return r;
}

double survival_X1(const StableParams& params, double x) {
  return invert_survival(params, x).value;
}

double cdf_X1(const StableParams& params, double x) {
  return 1.0 - survival_X1(params, x);
}

StableSampler::StableSampler(const StableParams& params)
    : alpha_(params.alpha),
      cauchy_(params.alpha == 1.0),
      shift_(params.skew_angle / params.alpha),
      prefactor_(std::pow(params.scale_gamma / std::cos(params.skew_angle),
                          1.0 / params.alpha)),
      inv_alpha_(1.0 / params.alpha),
      power_w_((1.0 - params.alpha) / params.alpha) {}

double StableSampler::operator()(PhiloxStream& stream, double scale) const {
  const double v = pi * (stream.uniform_open() - 0.5);
  if (cauchy_) {
    return scale * prefactor_ * std::tan(v);
  }
  const double w = stream.exponential();
  const double a = alpha_ * (v + shift_);
  const double x = std::sin(a) * std::pow(std::cos(v), -inv_alpha_) *
                   std::pow(std::cos(v - a) / w, power_w_);
  return scale * prefactor_ * x;
}

double sample_X1(const StableParams& params, PhiloxStream& stream) {
  return StableSampler(params)(stream);
}

double tail_onset(const StableParams& params, double rel_tol) {
  if (!params.has_positive_jumps()) {
    throw WrongRegime("tail_onset needs positive jumps (c_plus > 0)");
  }
  const double step = std::pow(2.0, 1.0 / 8.0);
  const int decade =
      static_cast<int>(std::ceil(std::log(10.0) / std::log(step)));
  const double start = 1.0 / make_ray(params).r_scale;
  int run = 0;
  double x = start;
  double first_good = start;
  for (int i = 0; i < 400; ++i, x *= step) {
    const double ratio =
        std::pow(x, params.alpha + 1.0) * density_f(params, x) / params.tail_A;
    if (std::abs(ratio - 1.0) <= rel_tol) {
      if (run == 0) {
        first_good = x;
      }
      if (++run > decade) {
        return first_good;
      }
    } else {
      run = 0;
    }
  }
  throw QuadratureFailure("tail_onset: no onset found below 1e40");
}

std::vector<InversionValue> invert_on_grid(const StableParams& params,
                                           std::span<const double> grid,
                                           int order) {
  std::vector<InversionValue> out;
  out.reserve(grid.size());
  for (double x : grid) {
    out.push_back(invert_density(params, x, order));
  }
  return out;
}

DensityTable tabulate_density(const StableParams& params,
                              std::span<const double> grid) {
  DensityTable table;
  table.grid.assign(grid.begin(), grid.end());
  table.meta.source = Provenance::quadrature;
  table.meta.config = params.describe();
  bool clamped = false;
  for (const InversionValue& v : invert_on_grid(params, grid, 0)) {
    double value = v.value;
    if (value < 0.0) {
      if (value < -1e-10) {
        throw QuadratureFailure("density inversion returned " +
                                std::to_string(value));
      }
      value = 0.0;
      clamped = true;
    }
    table.values.push_back(value);
    table.errbars.push_back(v.abs_err);
  }
  if (clamped) {
    table.meta.flags.push_back("clamped");
  }
  return table;
}

DensityTable scale_density(const DensityTable& table, double t,
                           const StableParams& params) {
  return scale_density(table, t, params.eta);
}

}  // namespace supstable
