#pragma once

#include "hyperls/mesh.hpp"
#include "hyperls/problems.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hyperls {

/// Dense output of one integrated shock trajectory x = s(t); nodes carry the
/// slope so queries use cubic Hermite interpolation between them.
class ShockPath {
 public:
  std::vector<double> t, s, sd;

  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }
  bool covers(double tq) const { return tq >= t_begin() && tq <= t_end(); }
  double eval(double tq) const;
  double eval_deriv(double tq) const;
  Vec2 start_point() const { return {t.front(), s.front()}; }
  Vec2 end_point() const { return {t.back(), s.back()}; }

  /// Piecewise-linear approximation with chord deviation below tol.
  std::vector<Vec2> polyline(double sagitta_tol) const;
};

/// Semi-analytic exact solution: closed-form characteristic arcs glued at the
/// x = 0 source jump, with shock trajectories integrated from the
/// Rankine-Hugoniot speed (u_left + u_right)/2.
class ExactSolution {
 public:
  int example = 0;  // 1..3, or 0 for a shock-free closed form
  double ode_tol = 0;
  std::function<double(double, double)> value;
  std::vector<ShockPath> shocks;        // discontinuity curves, non-overlapping
  std::vector<Vec2> special_points;     // shock exit / collision locations
  std::optional<Vec2> collision;        // Example 3 only

  /// Approximate distance to the nearest discontinuity or derivative kink
  /// (shocks, the x = 0 line, fan edges); used to exclude neighborhoods in
  /// pointwise checks.
  std::function<double(double, double)> singular_distance;
};

ExactSolution exact_solution(int k, double ode_tol = 1e-10);

/// Wraps a smooth closed form (no discontinuities) as an ExactSolution.
ExactSolution smooth_exact(std::function<double(double, double)> u);

/// Max |u_t + u u_x - r| by central differences on an interior sample grid,
/// skipping points closer than `exclusion` to a singular curve.
double oracle_pde_residual_max(const ExactSolution& ex, const ProblemSpec& prob,
                               int nt_samples, int nx_samples, double exclusion,
                               double fd_step = 1e-5);

/// Max |s'(t) - (u_l + u_r)/2| over interval midpoints of all shock paths.
double oracle_rh_max(const ExactSolution& ex, double side_offset = 1e-9);

/// L1 distance between oracle fields built at two ODE tolerances.
double oracle_field_l1_diff(int k, double tol_a, double tol_b, int nt_samples,
                            int nx_samples);

}  // namespace hyperls
