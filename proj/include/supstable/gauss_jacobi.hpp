#pragma once

#include <vector>

namespace supstable {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1],
/// a, b > -1, by Golub-Welsch.
QuadratureRule gauss_jacobi(int n, double a, double b);

/// n-point rule for the weight s^left (1-s)^right on [0, 1].
QuadratureRule gauss_jacobi_unit(int n, double left, double right);

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

}  // namespace supstable
