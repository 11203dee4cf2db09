#pragma once

#include "hyperls/exact_solution.hpp"
#include "hyperls/forms.hpp"
#include "hyperls/gn_solver.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hyperls {

using VectorField = std::function<Vec2(double, double)>;

struct HelmholtzParts {
  FEField q;    // (grad q, grad phi) = (w, grad phi) over V_{Gamma_C}
  FEField psi;  // (perp psi, perp nu) = (w, perp nu) over V_{Gamma_I}
};

/// Discrete Helmholtz projection of a vector field onto the two constrained
/// gradient spaces, one Poisson solve each.
HelmholtzParts discrete_helmholtz(const VectorField& w, const FESpacePtr& space_C,
                                  const FESpacePtr& space_I, int quad_degree = 0);

/// Galerkin projection q* of the data: (grad q*, grad phi) = -l_d(phi).
FEField solve_qstar(const DataFunctional& ld);

/// Discrete surrogate of the negative-norm residual of v:
/// || grad(q_v - q*) || with f(v) = grad q_v + perp psi_v.
double hminus1_residual(const FEField& v, const ProblemSpec& prob,
                        const FESpacePtr& space_C, int quad_degree = 0);

/// Minimum of || grad p - grad q_v ||^2 + || perp mu - perp psi_v ||^2 +
/// || grad p - grad q* ||^2 over the discrete spaces, evaluated by quadrature
/// at its closed-form minimizer p = (q_v + q*)/2, mu = psi_v.
double reduced_functional(const FEField& v, const ProblemSpec& prob,
                          const FESpacePtr& space_C, const FESpacePtr& space_I,
                          int quad_degree = 0);

struct ErrorNorms {
  double l2_sq = 0;
  double l1 = 0;
  double l1_sq = 0;
};

/// Shock-aware error integration: triangles crossed by one shock polyline are
/// split along it (sampled at 1e-6 resolution) before quadrature; triangles
/// near path endpoints or crossed by several paths fall back to adaptive
/// subdivision.
ErrorNorms error_norms(const FEField& u, const ExactSolution& exact, int quad_degree = 8);
ErrorNorms error_norms_fn(const std::function<double(double, double)>& u, const Mesh& mesh,
                          const ExactSolution& exact, int quad_degree = 8);

struct ConvergenceRow {
  int level = 0;
  double h = 0;
  double l2_sq = 0, l1_sq = 0;
  double l2_rate = 0, l1_rate = 0;  // log2 vs previous row, NaN on row 0
  double Mh = 0;
  double dMh = 0;  // M (previous level) - M (this level), NaN on row 0
  int iters = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

ConvergenceTable build_table(const std::vector<SolveReport>& reports,
                             const ExactSolution& exact);

/// Locates where the two discontinuity fronts of a colliding-shock solution
/// merge, from slice-wise front tracking plus extrapolation of the two
/// pre-collision trajectories.
std::optional<Vec2> extract_collision_from_field(const FEField& u,
                                                 const ProblemSpec& prob);

}  // namespace hyperls
