#include "supstable/stable_params.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "supstable/errors.hpp"

namespace supstable {

std::string StableParams::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << "alpha=" << alpha << " c_plus=" << c_plus << " c_minus=" << c_minus;
  return out.str();
}

StableParams validate_params(double alpha, double c_plus, double c_minus) {
  using std::numbers::pi;
  if (!std::isfinite(alpha) || !(alpha > 0.0 && alpha < 2.0)) {
    throw RejectRange("alpha must lie in (0, 2)");
  }
  if (!std::isfinite(c_plus) || !std::isfinite(c_minus) || c_plus < 0.0 ||
      c_minus < 0.0) {
    throw RejectRange("Levy weights c_plus, c_minus must be finite and >= 0");
  }
  if (c_plus + c_minus <= 0.0) {
    throw RejectRange("c_plus + c_minus must be > 0");
  }
  if (alpha < 1.0 && c_minus == 0.0) {
    throw RejectSubordinator(
        "alpha < 1 with c_minus = 0 makes X a subordinator");
  }
  if (alpha < 1.0 && c_plus == 0.0) {
    throw RejectSubordinator(
        "alpha < 1 with c_plus = 0 makes |X| a subordinator");
  }
  if (alpha == 1.0 && c_plus != c_minus) {
    throw RejectAsymmetricCauchy(
        "alpha = 1 requires c_plus = c_minus for strict stability");
  }

  StableParams p;
  p.alpha = alpha;
  p.c_plus = c_plus;
  p.c_minus = c_minus;
  p.eta = 1.0 / alpha;
  p.beta = (c_plus - c_minus) / (c_plus + c_minus);
  p.tail_A = c_plus;

  if (alpha == 1.0) {
    // integral of 2 (cos u - 1) u^{-2} over (0, inf) is -pi.
    p.scale_gamma = pi * c_plus;
    p.skew_omega = 0.0;
    p.skew_angle = 0.0;
    p.rho = 0.5;
  } else {
    const double tan_half = std::tan(pi * alpha / 2.0);
    p.scale_gamma = -boost::math::tgamma(-alpha) * std::cos(pi * alpha / 2.0) *
                    (c_plus + c_minus);
    p.skew_angle = std::atan(p.beta * tan_half);
    p.skew_omega = p.scale_gamma * p.beta * tan_half;
    p.rho = 0.5 + p.skew_angle / (pi * alpha);
  }
  return p;
}

StableParams reflect(const StableParams& params) {
  return validate_params(params.alpha, params.c_minus, params.c_plus);
}

}  // namespace supstable
