#pragma once

#include "hyperls/forms.hpp"

#include <optional>
#include <vector>

namespace hyperls {

struct GNOptions {
  double rel_tol = 1e-8;
  int max_iters = 50;
  int max_backtracks = 30;
  double shrink = 0.5;          // line-search damping factor
  bool augment = true;
  std::optional<double> eta;    // regularization exponent: eps = h^eta
  int quad_degree = 0;          // 0: pick from the space orders

  // linear solver policy: direct Cholesky up to this many unknowns, then
  // Jacobi-preconditioned CG (memory headroom on fine levels)
  int direct_dof_limit = 2'600'000;
  double cg_tol = 1e-10;
  int cg_maxit = 500'000;
};

struct IterRecord {
  double functional;
  double damping;
  double lin_residual;
};

struct SolveReport {
  int level = 0;
  double h = 0;
  FEField u, q, psi;
  double M_h = 0;               // final value of the minimized functional
  double initial_functional = 0;
  int iterations = 0;           // accepted Gauss-Newton steps
  bool stalled = false;         // line search ran out of backtracks
  double eps = 0;               // regularization weight used on this level
  std::vector<IterRecord> log;  // non-increasing functional values
};

struct StalledLineSearch : std::runtime_error {
  explicit StalledLineSearch(const std::string& what) : std::runtime_error(what) {}
};

/// Damped Gauss-Newton on one level: x <- x + s*delta with the largest
/// s in {1, shrink, shrink^2, ...} that decreases the functional; stops when
/// the functional change relative to the initial value drops below rel_tol.
SolveReport solve_level(const ProblemSpec& prob, const FESpacePtr& space_u,
                        const FESpacePtr& space_c, const FESpacePtr& space_i,
                        const GNOptions& opts, FEField u0, FEField q0, FEField psi0);

/// Nested iteration: constant initial guess (the mean of g over Gamma_I) on
/// the coarsest level, then each level starts from the interpolated previous
/// solution.
std::vector<SolveReport> nested_iterate(const ProblemSpec& prob, const MeshPtr& coarse,
                                        int levels, int order_u, int order_v,
                                        const GNOptions& opts);

}  // namespace hyperls
