#pragma once

#include "hyperls/mesh.hpp"
#include "hyperls/quadrature.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <vector>

namespace hyperls {

enum class Constraint { None, OnGammaC, OnGammaI };

/// Lagrange space of order 1 or 2 on a tagged mesh. P1 dofs are the mesh
/// vertices; P2 adds one dof per edge midpoint, numbered after all vertices
/// in first-encounter order over the triangle list. Immutable.
class FESpace {
 public:
  MeshPtr mesh;
  int order = 1;
  Constraint constraint = Constraint::None;

  int n_dofs = 0;
  int n_local = 3;  // dofs per triangle: 3 (P1) or 6 (P2)
  Eigen::Matrix<double, Eigen::Dynamic, 2> dof_coords;
  Eigen::Matrix<int, Eigen::Dynamic, 6> elem_dofs;  // first n_local columns used

  std::vector<char> constrained;  // per dof
  std::vector<int> free_index;    // dof -> free slot, -1 if constrained
  std::vector<int> free_dofs;     // free slot -> dof
  int n_free = 0;

  int dof(int tri, int local) const { return elem_dofs(tri, local); }
};

using FESpacePtr = std::shared_ptr<const FESpace>;

FESpacePtr make_space(MeshPtr mesh, int order, Constraint constraint);

/// Basis values and physical (t,x) gradients at a reference point of a
/// triangle. values sum to 1, gradients sum to zero.
struct BasisEval {
  Eigen::Matrix<double, 6, 1> values;
  Eigen::Matrix<double, 6, 2> grads;
  int n = 3;
};

BasisEval eval_basis(const FESpace& space, int tri, double xi, double eta);

/// Per-rule tables of basis values and reference gradients, plus the affine
/// data needed to push gradients to a given triangle.
struct BasisTable {
  Eigen::MatrixXd values;              // nq x n_local
  std::vector<Eigen::MatrixXd> rgrad;  // nq of (n_local x 2), reference coords
  int n_local = 3;
};

BasisTable tabulate_basis(int order, const QuadratureRule& rule);

/// Jacobian data of the affine map of a triangle.
struct AffineMap {
  Eigen::Matrix2d jac;      // columns v1-v0, v2-v0
  Eigen::Matrix2d jac_inv_t;
  double det = 0;           // = 2*area
  Vec2 origin;
};

AffineMap affine_map(const Mesh& mesh, int tri);

/// Coefficient vector over an FESpace; constrained entries are kept at 0.
class FEField {
 public:
  FESpacePtr space;
  Eigen::VectorXd coeffs;

  FEField() = default;
  explicit FEField(FESpacePtr s) : space(std::move(s)) {
    coeffs = Eigen::VectorXd::Zero(space->n_dofs);
  }

  double evaluate(double t, double x) const;
  Vec2 evaluate_grad(double t, double x) const;
  void zero_constrained();
};

FEField interpolate(const FESpacePtr& space, const std::function<double(double, double)>& w);

/// Interpolates a field onto another space (typically one refinement finer);
/// exact for nested meshes and equal or higher order.
FEField transfer(const FEField& from, const FESpacePtr& to);

}  // namespace hyperls
