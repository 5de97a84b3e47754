#pragma once

#include <string>

namespace supstable {

/// A strictly stable Levy process given by its index and the two weights of
/// the Levy density c_plus x^{-(alpha+1)} (x > 0), c_minus |x|^{-(alpha+1)}
/// (x < 0). Only validate_params() produces instances; every derived field
/// is filled there and never recomputed.
struct StableParams {
  double alpha = 0.0;
  double c_plus = 0.0;
  double c_minus = 0.0;

  double rho = 0.0;     ///< P(X_1 > 0)
  double eta = 0.0;     ///< 1 / alpha
  double beta = 0.0;    ///< (c_plus - c_minus) / (c_plus + c_minus)
  double tail_A = 0.0;  ///< P(X_1 > x) ~ (tail_A / alpha) x^{-alpha}

  /// Re psi(theta) = -scale_gamma |theta|^alpha.
  double scale_gamma = 0.0;
  /// Im psi(theta) = skew_omega sign(theta) |theta|^alpha.
  double skew_omega = 0.0;
  /// atan(skew_omega / scale_gamma) = pi alpha (rho - 1/2).
  double skew_angle = 0.0;

  bool spectrally_negative() const { return c_plus == 0.0; }
  bool has_positive_jumps() const { return c_plus > 0.0; }

  /// "alpha=1.5 c_plus=1 c_minus=1" style summary for logs and metadata.
  std::string describe() const;
};

/// Validates raw (alpha, c_plus, c_minus) and fills the derived fields.
/// Throws RejectRange, RejectSubordinator or RejectAsymmetricCauchy.
StableParams validate_params(double alpha, double c_plus, double c_minus);

/// Parameters of -X: the Levy weights swap.
StableParams reflect(const StableParams& params);

}  // namespace supstable
