#include "hyperls/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperls {

Vec2 burgers_flux_value(double v) { return {v, 0.5 * v * v}; }
Vec2 burgers_flux_deriv(double v) { return {1.0, v}; }

Flux burgers_flux() {
  return {[](double v) { return burgers_flux_value(v); },
          [](double v) { return burgers_flux_deriv(v); }};
}

Flux linear_flux(double a) {
  return {[a](double v) { return Vec2(v, a * v); },
          [a](double) { return Vec2(1.0, a); }};
}

namespace {

const std::array<double, 4> kRect{0.0, 1.0, -0.25, 1.75};

BoundarySplit benchmark_split() {
  BoundarySplit split;
  split.inflow.push_back({Vec2(0.0, -0.25), Vec2(0.0, 1.75)});  // t = 0
  split.inflow.push_back({Vec2(0.0, -0.25), Vec2(1.0, -0.25)}); // x = -0.25
  return split;
}

double benchmark_source(double, double x) { return x <= 0.0 ? 1.0 : 2.0; }

}  // namespace

ProblemSpec example_spec(int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("example_spec: k must be 1, 2, or 3");
  ProblemSpec p;
  p.flux = burgers_flux();
  p.rect = kRect;
  p.split = benchmark_split();
  p.source = benchmark_source;
  p.source_jump_lines = {0.0};
  switch (k) {
    case 1:
      p.inflow = [](double t, double x) {
        if (t <= 0.0) return x <= 0.0 ? 3.0 : 1.0;
        return t + 3.0;  // x = -0.25
      };
      p.inflow_jump_points = {Vec2(0.0, 0.0)};
      break;
    case 2:
      p.inflow = [](double t, double x) {
        if (t <= 0.0) return x <= 0.0 ? 1.0 : 2.0;
        return t + 1.0;
      };
      p.inflow_jump_points = {Vec2(0.0, 0.0)};
      break;
    default:
      p.inflow = [](double t, double x) {
        if (t <= 0.0) {
          if (x <= 0.0) return 3.0;
          return x <= 0.5 ? 1.0 : 0.5;
        }
        return t + 3.0;
      };
      p.inflow_jump_points = {Vec2(0.0, 0.0), Vec2(0.0, 0.5)};
      break;
  }
  return p;
}

ManufacturedCase manufactured_case() {
  const double pi = std::acos(-1.0);
  auto u = [pi](double t, double x) { return 2.5 + 0.25 * std::sin(pi * t) * std::cos(pi * x); };
  auto ut = [pi](double t, double x) { return 0.25 * pi * std::cos(pi * t) * std::cos(pi * x); };
  auto ux = [pi](double t, double x) { return -0.25 * pi * std::sin(pi * t) * std::sin(pi * x); };

  ManufacturedCase mc;
  mc.exact = u;
  mc.problem.flux = burgers_flux();
  mc.problem.rect = kRect;
  mc.problem.split = benchmark_split();
  mc.problem.source = [u, ut, ux](double t, double x) {
    return ut(t, x) + u(t, x) * ux(t, x);
  };
  mc.problem.inflow = u;
  return mc;
}

double inflow_mean(const ProblemSpec& prob) {
  // Composite midpoint over each inflow segment, split at declared jumps;
  // fine sampling keeps this exact enough for an initial guess.
  double num = 0, den = 0;
  const int ns = 4096;
  for (const auto& seg : prob.split.inflow) {
    const Vec2 d = seg.b - seg.a;
    const double len = d.norm();
    for (int i = 0; i < ns; ++i) {
      const Vec2 p = seg.a + ((i + 0.5) / ns) * d;
      num += prob.inflow(p[0], p[1]) * (len / ns);
    }
    den += len;
  }
  return num / den;
}

}  // namespace hyperls
