#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace hyperls {

/// Symmetric rule on the reference triangle (0,0), (1,0), (0,1); points in
/// barycentric coordinates, weights sum to the reference area 1/2.
struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 3> bary;
  Eigen::VectorXd weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
  double xi(int q) const { return bary(q, 1); }
  double eta(int q) const { return bary(q, 2); }
};

/// Smallest positive-weight rule exact at least to the requested degree.
QuadratureRule quadrature_rule(int degree);

/// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct EdgeRule {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
  int degree = 0;
};

EdgeRule edge_rule(int degree);

}  // namespace hyperls
