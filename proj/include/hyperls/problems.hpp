#pragma once

#include "hyperls/mesh.hpp"

#include <functional>
#include <vector>

namespace hyperls {

/// Space-time flux f(v) and its derivative f'(v), both valued in (t,x)
/// components.
struct Flux {
  std::function<Vec2(double)> f;
  std::function<Vec2(double)> fprime;
};

Flux burgers_flux();          // f(v) = [v, v^2/2]
Flux linear_flux(double a);   // f(v) = [v, a v]

Vec2 burgers_flux_value(double v);
Vec2 burgers_flux_deriv(double v);

/// A balance law instance: div f(u) = r in rect, u = g on Gamma_I.
struct ProblemSpec {
  Flux flux;
  std::function<double(double, double)> source;  // r(t,x)
  std::vector<double> source_jump_lines;         // vertical lines x = c where r jumps
  std::function<double(double, double)> inflow;  // g on Gamma_I
  std::vector<Vec2> inflow_jump_points;          // boundary points where g jumps
  std::array<double, 4> rect{};
  BoundarySplit split;
};

/// The three benchmark problems on (0,1) x (-0.25, 1.75) with
/// r = 1 for x <= 0 and r = 2 for x > 0, inflow on {t=0} and {x=-0.25}.
ProblemSpec example_spec(int k);

/// Smooth validation problem: u = 2.5 + 0.25 sin(pi t) cos(pi x) with the
/// source chosen so u solves the Burgers balance law exactly and g = u.
struct ManufacturedCase {
  ProblemSpec problem;
  std::function<double(double, double)> exact;
};

ManufacturedCase manufactured_case();

/// Mean of g over Gamma_I, the coarse-level initial constant.
double inflow_mean(const ProblemSpec& prob);

}  // namespace hyperls
