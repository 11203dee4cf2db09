#include "hyperls/problems.hpp"

#include <doctest.h>

#include <random>

using namespace hyperls;

TEST_CASE("burgers flux and derivative") {
  CHECK(burgers_flux_value(0.0) == Vec2(0, 0));
  CHECK(burgers_flux_value(2.0) == Vec2(2, 2));
  CHECK(burgers_flux_deriv(3.0) == Vec2(1, 3));

  // derivative matches centered differences
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> unif(-4.0, 4.0);
  const auto flux = burgers_flux();
  const double d = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const double v = unif(rng);
    const Vec2 fd = (flux.f(v + d) - flux.f(v - d)) / (2 * d);
    CHECK((flux.fprime(v) - fd).norm() <= 1e-6 * (1.0 + fd.norm()));
  }
}

TEST_CASE("benchmark problem data") {
  const auto p1 = example_spec(1);
  CHECK(p1.inflow(0.0, -0.1) == 3.0);
  CHECK(p1.inflow(0.0, 0.1) == 1.0);
  CHECK(p1.inflow(0.5, -0.25) == 3.5);
  CHECK(p1.source(0.3, -0.2) == 1.0);
  CHECK(p1.source(0.3, 0.2) == 2.0);

  const auto p2 = example_spec(2);
  CHECK(p2.inflow(0.0, 1.0) == 2.0);
  CHECK(p2.inflow(0.0, -1e-9) == 1.0);

  const auto p3 = example_spec(3);
  CHECK(p3.inflow(0.0, 0.75) == 0.5);
  CHECK(p3.inflow(0.0, 0.3) == 1.0);
  CHECK(p3.inflow(0.0, -0.2) == 3.0);
  CHECK(p3.inflow(0.25, -0.25) == 3.25);

  CHECK_THROWS(example_spec(0));
  CHECK_THROWS(example_spec(4));

  // inflow means: Ex1 (3*.25 + 1*1.75 + 3.5)/3 = 2, Ex2 1.75, Ex3 5.375/3
  CHECK(inflow_mean(p1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(inflow_mean(p2) == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(inflow_mean(p3) == doctest::Approx(5.375 / 3).epsilon(1e-12));
}

TEST_CASE("manufactured case solves its own balance law") {
  const auto mc = manufactured_case();
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> ut(0.01, 0.99), ux(-0.24, 1.74);
  const double d = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const double t = ut(rng), x = ux(rng);
    const double u = mc.exact(t, x);
    const double dudt = (mc.exact(t + d, x) - mc.exact(t - d, x)) / (2 * d);
    const double dudx = (mc.exact(t, x + d) - mc.exact(t, x - d)) / (2 * d);
    CHECK(dudt + u * dudx == doctest::Approx(mc.problem.source(t, x)).epsilon(1e-7));
  }
}
