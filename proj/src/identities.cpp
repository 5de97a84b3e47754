#include "supstable/identities.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "supstable/errors.hpp"
#include "supstable/gauss_jacobi.hpp"
#include "supstable/stable_core.hpp"

namespace supstable {

namespace {

using std::numbers::pi;

constexpr double kMaxRelErr = 0.25;
constexpr double kEdgeStderr = 0.05;
constexpr int kPanelNodes = 12;

struct LineFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
};

LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(y[i]) - my - fit.slope * (std::log(x[i]) - mx);
    rss += r * r;
  }
  fit.stderr_slope = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : HUGE_VAL;
  return fit;
}

// Integral of a smooth function over [a, b] on the unit scale, where the
// rule's error heuristics are calibrated.
template <class F>
double adaptive(F f, double a, double b, double* err) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 21>;
  const double w = b - a;
  double e = 0.0;
  const double v = Rule::integrate([&](double u) { return f(a + w * u); }, 0.0,
                                   1.0, 15, 1e-12, &e);
  *err += e * w;
  return v * w;
}

void check_accuracy(double value, double err, const char* what, double x) {
  if (!(err <= kConvolutionTolerance * std::abs(value) + 1e-300) ||
      !std::isfinite(value)) {
    std::ostringstream msg;
    msg << what << " missed its error target at x = " << x << " (value "
        << value << ", error " << err << ")";
    throw QuadratureFailure(msg.str());
  }
}

// Splits [lo, hi] so that every piece is no wider than its distance to
// `pole` (outside the interval), keeping algebraic near-singularities
// resolvable by a fixed rule.
std::vector<std::pair<double, double>> graded(double lo, double hi,
                                              double pole) {
  std::vector<std::pair<double, double>> pieces;
  if (pole >= hi) {
    double b = hi;
    while (b - lo > pole - b) {
      const double a = pole - 2.0 * (pole - b);
      pieces.emplace_back(a, b);
      b = a;
    }
    pieces.emplace_back(lo, b);
  } else {
    double a = lo;
    while (hi - a > a - pole) {
      const double b = pole + 2.0 * (a - pole);
      pieces.emplace_back(a, b);
      a = b;
    }
    pieces.emplace_back(a, hi);
  }
  return pieces;
}

std::vector<double> knots_above(const DensityFn& fn, double x) {
  const auto& g = fn.table().grid;
  return {std::upper_bound(g.begin(), g.end(), x), g.end()};
}

}  // namespace

DensityFn::DensityFn(DensityTable table, double left_exponent,
                     double right_exponent)
    : table_(std::move(table)),
      left_exponent_(left_exponent),
      right_exponent_(right_exponent) {
  check_table(table_);
  if (table_.size() < 2 || !(table_.grid.front() > 0.0)) {
    throw std::invalid_argument("DensityFn needs 2+ knots on a positive grid");
  }
  cumulative_.assign(table_.size(), 0.0);
  for (std::size_t j = 0; j + 1 < table_.size(); ++j) {
    cumulative_[j + 1] =
        cumulative_[j] + segment_integral(j, table_.grid[j + 1]);
  }
}

double DensityFn::operator()(double x) const {
  const auto& g = table_.grid;
  const auto& v = table_.values;
  if (!(x > 0.0)) {
    return 0.0;
  }
  if (x <= g.front()) {
    return v.front() == 0.0
               ? 0.0
               : v.front() * std::pow(x / g.front(), left_exponent_);
  }
  if (x >= g.back()) {
    return v.back() == 0.0 ? 0.0
                           : v.back() * std::pow(x / g.back(), right_exponent_);
  }
  const std::size_t j =
      static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) -
                               g.begin()) -
      1;
  const double va = v[j];
  const double vb = v[j + 1];
  if (va > 0.0 && vb > 0.0) {
    const double p = std::log(vb / va) / std::log(g[j + 1] / g[j]);
    return va * std::pow(x / g[j], p);
  }
  return va + (vb - va) * (x - g[j]) / (g[j + 1] - g[j]);
}

double DensityFn::segment_integral(std::size_t j, double b) const {
  const double a = table_.grid[j];
  const double va = table_.values[j];
  const double vb = table_.values[j + 1];
  const double gb = table_.grid[j + 1];
  if (va > 0.0 && vb > 0.0) {
    const double p = std::log(vb / va) / std::log(gb / a);
    if (std::abs(p + 1.0) < 1e-12) {
      return va * a * std::log(b / a);
    }
    return va * a * std::expm1((p + 1.0) * std::log(b / a)) / (p + 1.0);
  }
  const double d = b - a;
  return va * d + (vb - va) * d * d / (2.0 * (gb - a));
}

double DensityFn::left_tail(double x) const {
  const double g0 = table_.grid.front();
  const double v0 = table_.values.front();
  if (v0 == 0.0) {
    return 0.0;
  }
  if (!(left_exponent_ > -1.0)) {
    throw NonNormalizable("left power-law extension is not integrable at 0");
  }
  return v0 * g0 / (left_exponent_ + 1.0) *
         std::pow(x / g0, left_exponent_ + 1.0);
}

double DensityFn::cdf(double x) const {
  const auto& g = table_.grid;
  if (!(x > 0.0)) {
    return 0.0;
  }
  if (x <= g.front()) {
    return left_tail(x);
  }
  const double base = left_tail(g.front());
  if (x <= g.back()) {
    const std::size_t j = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) -
                                 g.begin()) -
            1,
        g.size() - 2);
    return base + cumulative_[j] + segment_integral(j, x);
  }
  const double vn = table_.values.back();
  double beyond = 0.0;
  if (vn > 0.0) {
    if (!(right_exponent_ < -1.0)) {
      throw NonNormalizable("right power-law extension is not integrable");
    }
    beyond = vn * g.back() / (right_exponent_ + 1.0) *
             std::expm1((right_exponent_ + 1.0) * std::log(x / g.back()));
  }
  return base + cumulative_.back() + beyond;
}

double DensityFn::mass() const {
  const double vn = table_.values.back();
  double right = 0.0;
  if (vn > 0.0) {
    if (!(right_exponent_ < -1.0)) {
      throw NonNormalizable("right power-law extension is not integrable");
    }
    right = -vn * table_.grid.back() / (right_exponent_ + 1.0);
  }
  return left_tail(table_.grid.front()) + cumulative_.back() + right;
}

DensityFn DensityFn::normalized() const {
  const double total = mass();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw NonNormalizable("density has no finite positive mass");
  }
  DensityTable scaled = table_;
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    scaled.values[i] /= total;
    if (scaled.has_errbars()) {
      scaled.errbars[i] /= total;
    }
  }
  return DensityFn(std::move(scaled), left_exponent_, right_exponent_);
}

DensityFn make_density_fn(const DensityTable& table, double theory_left,
                          double theory_right) {
  check_table(table);
  DensityTable kept;
  kept.meta = table.meta;
  std::size_t lo = 0;
  std::size_t hi = table.size();
  if (table.has_errbars()) {
    auto reliable = [&](std::size_t i) {
      return table.values[i] > 0.0 &&
             table.errbars[i] < kMaxRelErr * table.values[i] &&
             table.grid[i] >= kSkeletonFloor * table.meta.resolution;
    };
    std::size_t mode = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (reliable(i) &&
          (!reliable(mode) || table.values[i] > table.values[mode])) {
        mode = i;
      }
    }
    lo = mode;
    hi = mode + 1;
    while (lo > 0 && reliable(lo - 1)) {
      --lo;
    }
    while (hi < table.size() && reliable(hi)) {
      ++hi;
    }
  }
  for (std::size_t i = lo; i < hi; ++i) {
    kept.grid.push_back(table.grid[i]);
    kept.values.push_back(table.values[i]);
    if (table.has_errbars()) {
      kept.errbars.push_back(table.errbars[i]);
    }
  }
  if (kept.size() < 2) {
    throw InsufficientSamples("fewer than two reliable knots in the table");
  }

  const std::size_t k =
      std::min<std::size_t>(8, std::max<std::size_t>(3, kept.size() / 3));
  double left = theory_left;
  double right = theory_right;
  if (kept.size() >= 3) {
    std::vector<double> xs(kept.grid.begin(), kept.grid.begin() + k);
    std::vector<double> ys(kept.values.begin(), kept.values.begin() + k);
    if (std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0.0; })) {
      const LineFit fit = loglog_fit(xs, ys);
      if (fit.stderr_slope <= kEdgeStderr && fit.slope > -1.0) {
        left = fit.slope;
      }
    }
    xs.assign(kept.grid.end() - k, kept.grid.end());
    ys.assign(kept.values.end() - k, kept.values.end());
    if (std::all_of(ys.begin(), ys.end(), [](double v) { return v > 0.0; })) {
      const LineFit fit = loglog_fit(xs, ys);
      if (fit.stderr_slope <= kEdgeStderr && fit.slope < -1.0) {
        right = fit.slope;
      }
    }
  }
  if (left == theory_left) {
    kept.meta.flags.push_back("fallback-left");
  }
  if (right == theory_right) {
    kept.meta.flags.push_back("fallback-right");
  }
  return DensityFn(std::move(kept), left, right);
}

DensityFn meander_density_fn(const DensityTable& ptilde,
                             const StableParams& params) {
  return make_density_fn(ptilde, params.alpha * params.rho,
                         -(params.alpha + 1.0));
}

DensityFn supremum_density_fn(const DensityTable& m,
                              const StableParams& params) {
  return make_density_fn(m, params.alpha * params.rho - 1.0,
                         -(params.alpha + 1.0));
}

double m_from_ptilde_beta(const DensityFn& ptilde, const StableParams& params,
                          double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("m_from_ptilde_beta needs x > 0");
  }
  const double alpha = params.alpha;
  const double rho = params.rho;
  const double eta = params.eta;
  // s = (x / y)^alpha maps the knots above x to breakpoints in (0, 1)
  const std::vector<double> ys = knots_above(ptilde, x);
  std::vector<double> b{1.0};
  for (double y : ys) {
    b.push_back(std::pow(x / y, alpha));
  }
  // integrand without the (1 - s)^{-rho} factor
  auto g = [&](double s) {
    return std::pow(s, rho - 1.0 - eta) * ptilde(x * std::pow(s, -eta));
  };

  double value = 0.0;
  double err = 0.0;
  auto accumulate = [&](auto&& panel) {
    const double coarse = panel(kPanelNodes);
    const double fine = panel(2 * kPanelNodes);
    value += fine;
    err += std::abs(fine - coarse);
  };

  static const QuadratureRule legendre_coarse = gauss_legendre(kPanelNodes);
  static const QuadratureRule legendre_fine = gauss_legendre(2 * kPanelNodes);
  auto legendre_panels = [&](double from, double to, double pole) {
    for (const auto& [lo, hi] : graded(from, to, pole)) {
      accumulate([&, lo = lo, hi = hi](int n) {
        const QuadratureRule& r =
            n == kPanelNodes ? legendre_coarse : legendre_fine;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
          const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * r.nodes[i];
          sum += r.weights[i] * std::pow(1.0 - s, -rho) * g(s);
        }
        return 0.5 * (hi - lo) * sum;
      });
    }
  };

  // Beyond the last knot p~ is c y^p: the integrand is s^{q + rho - 1}
  // (1 - s)^{-rho} times a smooth factor, q = -eta (1 + p).
  const double q = -eta * (1.0 + ptilde.right_exponent());
  const double s0 = b.back();
  auto smooth_tail = [&](double s) {
    return ptilde(x * std::pow(s, -eta)) * std::pow(s, -eta - q);
  };
  if (ys.empty()) {
    accumulate([&](int n) {
      const QuadratureRule r = gauss_jacobi_unit(n, q + rho - 1.0, -rho);
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += r.weights[i] * smooth_tail(r.nodes[i]);
      }
      return sum;
    });
  } else {
    const double head = std::min(s0, 0.5);
    accumulate([&](int n) {
      const QuadratureRule r = gauss_jacobi_unit(n, q + rho - 1.0, 0.0);
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        const double s = head * r.nodes[i];
        sum += r.weights[i] * std::pow(1.0 - s, -rho) * smooth_tail(s);
      }
      return std::pow(head, q + rho) * sum;
    });
    if (head < s0) {
      legendre_panels(head, s0, 1.0);
    }
    for (std::size_t j = 1; j + 1 < b.size(); ++j) {
      legendre_panels(b[j + 1], b[j], 1.0);
    }
    // [b1, 1]: the (1 - s)^{-rho} weight on the half next to 1, graded
    // panels towards 0 on the rest (b1 is small when x is below the grid)
    const double b1 = b[1];
    const double split = std::max(b1, 0.5);
    if (b1 < split) {
      legendre_panels(b1, split, 0.0);
    }
    accumulate([&](int n) {
      const QuadratureRule r = gauss_jacobi_unit(n, -rho, 0.0);
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += r.weights[i] * g(1.0 - (1.0 - split) * r.nodes[i]);
      }
      return std::pow(1.0 - split, 1.0 - rho) * sum;
    });
  }
  check_accuracy(value, err, "Gauss-Jacobi convolution", x);
  return std::sin(rho * pi) / pi * value;
}

double m_from_ptilde_z(const DensityFn& ptilde, const StableParams& params,
                       double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("m_from_ptilde_z needs x > 0");
  }
  const double alpha = params.alpha;
  const double rho = params.rho;
  const double xa = std::pow(x, alpha);

  std::vector<double> breaks{x};
  const std::vector<double> ys = knots_above(ptilde, x);
  const double top = std::max(ys.empty() ? x : ys.back(), 2.0 * x);
  for (double y : ys) {
    if (y < top) {
      breaks.push_back(y);
    }
  }
  breaks.push_back(top);

  double value = 0.0;
  double err = 0.0;
  // [x, first break]: v = (y^alpha - x^alpha)^{1 - rho} removes the
  // endpoint singularity.
  {
    const double vmax = std::pow(std::pow(breaks[1], alpha) - xa, 1.0 - rho);
    auto f = [&](double v) {
      const double y =
          std::pow(xa + std::pow(v, 1.0 / (1.0 - rho)), 1.0 / alpha);
      return ptilde(y) * std::pow(y, 1.0 - alpha) / (alpha * (1.0 - rho));
    };
    value += adaptive(f, 0.0, vmax, &err);
  }
  for (std::size_t j = 1; j + 1 < breaks.size(); ++j) {
    auto f = [&](double y) {
      return ptilde(y) * std::pow(std::pow(y, alpha) - xa, -rho);
    };
    for (const auto& [lo, hi] : graded(breaks[j], breaks[j + 1], x)) {
      value += adaptive(f, lo, hi, &err);
    }
  }
  // [top, inf): w = top / y
  {
    auto f = [&](double w) {
      const double y = top / w;
      if (!std::isfinite(y)) {
        return 0.0;
      }
      const double p = ptilde(y);
      const double gap = std::pow(y, alpha) - xa;
      if (p == 0.0 || !std::isfinite(gap)) {
        return 0.0;
      }
      return p * std::pow(gap, -rho) * top / (w * w);
    };
    boost::math::quadrature::tanh_sinh<double> rule;
    double e = 0.0;
    value += rule.integrate(f, 0.0, 1.0, 1e-12, &e);
    err += e;
  }
  check_accuracy(value, err, "substituted convolution", x);
  return alpha * std::pow(x, alpha * rho - 1.0) * std::sin(rho * pi) / pi *
         value;
}

DensityTable m_table_from_ptilde(const DensityFn& ptilde,
                                 const StableParams& params,
                                 const std::vector<double>& grid) {
  DensityTable out;
  out.grid = grid;
  out.values.reserve(grid.size());
  for (double x : grid) {
    out.values.push_back(std::max(m_from_ptilde_beta(ptilde, params, x), 0.0));
  }
  out.meta.source = Provenance::quadrature;
  out.meta.config =
      "convolution of meander table (" + ptilde.table().meta.config + ")";
  out.meta.resolution = ptilde.table().meta.resolution;
  return out;
}

double passage_density(const DensityFn& m, const StableParams& params, double x,
                       double t) {
  if (!(x > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("passage_density needs x, t > 0");
  }
  const double eta = params.eta;
  return eta * x * std::pow(t, -eta - 1.0) * m(x * std::pow(t, -eta));
}

double passage_survival(const DensityFn& m, const StableParams& params,
                        double x, double t) {
  if (!(x > 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("passage_survival needs x, t > 0");
  }
  return m.cdf(x * std::pow(t, -params.eta));
}

double passage_survival(const DensityTable& m_table, const StableParams& params,
                        double x, double t) {
  return passage_survival(supremum_density_fn(m_table, params), params, x, t);
}

double passage_total_mass(const DensityFn& m, const StableParams& params,
                          double x) {
  // t = e^tau; the integrand is smooth in tau between the knot times
  const double alpha = params.alpha;
  auto h = [&](double tau) {
    const double t = std::exp(tau);
    if (!(t > 0.0) || !std::isfinite(t)) {
      return 0.0;
    }
    const double v = passage_density(m, params, x, t) * t;
    return std::isfinite(v) ? v : 0.0;
  };
  const auto& g = m.table().grid;
  // knot y <-> tau = alpha log(x / y), decreasing in y
  std::vector<double> taus;
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    taus.push_back(alpha * std::log(x / *it));
  }
  double total = 0.0;
  double err = 0.0;
  for (std::size_t j = 0; j + 1 < taus.size(); ++j) {
    total += adaptive(h, taus[j], taus[j + 1], &err);
  }
  boost::math::quadrature::exp_sinh<double> half_line;
  const double t_lo = taus.front();
  const double t_hi = taus.back();
  total += half_line.integrate([&](double u) { return h(t_lo - u); }, 0.0,
                               std::numeric_limits<double>::infinity());
  total += half_line.integrate([&](double u) { return h(t_hi + u); }, 0.0,
                               std::numeric_limits<double>::infinity());
  return total;
}

double spectrally_negative_m(const StableParams& params, double x) {
  if (params.has_positive_jumps()) {
    throw WrongRegime(
        "the alpha f identity needs c_plus = 0 (no positive jumps), got " +
        params.describe());
  }
  if (!(x > 0.0)) {
    throw std::invalid_argument("spectrally_negative_m needs x > 0");
  }
  return params.alpha * density_f(params, x);
}

}  // namespace supstable
