#include "supstable/gauss_jacobi.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace supstable {

QuadratureRule gauss_jacobi(int n, double a, double b) {
  if (n < 1 || !(a > -1.0) || !(b > -1.0)) {
    throw std::invalid_argument("gauss_jacobi: need n >= 1 and a, b > -1");
  }
  const double ab = a + b;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 1));
  diag(0) = (b - a) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    double sq;
    if (k == 1) {
      // (k + a + b) cancels against (2k + a + b - 1); keeps a + b = -1 finite
      sq = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      sq = 4.0 * k * (k + a) * (k + b) * (k + ab) /
           (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(sq);
  }

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mu0 =
      std::exp((ab + 1.0) * std::log(2.0) + boost::math::lgamma(a + 1.0) +
               boost::math::lgamma(b + 1.0) - boost::math::lgamma(ab + 2.0));
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off.head(n - 1));
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

QuadratureRule gauss_jacobi_unit(int n, double left, double right) {
  QuadratureRule rule = gauss_jacobi(n, right, left);
  const double scale = std::pow(2.0, -(left + right + 1.0));
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = 0.5 * (1.0 + rule.nodes[i]);
    rule.weights[i] *= scale;
  }
  return rule;
}

QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace supstable
