#include "hyperls/exact_solution.hpp"

#include <doctest.h>

#include <cmath>

using namespace hyperls;

TEST_CASE("oracle matches the prescribed data") {
  const auto ex1 = exact_solution(1);
  CHECK(ex1.value(0.0, -0.2) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(ex1.value(0.0, 1.2) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ex1.value(0.5, -0.25) == doctest::Approx(3.5).epsilon(1e-12));

  const auto ex2 = exact_solution(2);
  // before characteristics cross x = 0 the left region is the vertical slice 1 + t
  for (double t : {0.05, 0.3, 0.8})
    for (double x : {-0.24, -0.1, -0.01})
      CHECK(ex2.value(t, x) == doctest::Approx(1.0 + t).epsilon(1e-12));

  const auto ex3 = exact_solution(3);
  CHECK(ex3.value(0.0, 0.75) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("Example 1 shock path solves its Rankine-Hugoniot ODE") {
  // With left state 3 + t + s/(3+t) and right state 1 + 2t the shock ODE
  // s' = (u_l + u_r)/2 is linear; integrating factor (3+t)^(-1/2) gives
  // s(t) = t^2 + t - 6 + 2 sqrt(3) sqrt(3 + t).
  const auto ex1 = exact_solution(1);
  REQUIRE(ex1.shocks.size() == 1);
  const auto& path = ex1.shocks[0];
  CHECK(path.t_begin() == doctest::Approx(0.0));
  for (double t = 0.0; t <= path.t_end(); t += 0.0137) {
    const double exact = t * t + t - 6.0 + 2.0 * std::sqrt(3.0) * std::sqrt(3.0 + t);
    CHECK(path.eval(t) == doctest::Approx(exact).epsilon(1e-9));
  }
  // the shock leaves through x = 1.75 before t = 1
  REQUIRE(ex1.special_points.size() == 1);
  CHECK(ex1.special_points[0][1] == doctest::Approx(1.75).epsilon(1e-12));
  CHECK(ex1.special_points[0][0] < 1.0);
}

TEST_CASE("Example 3 collision point") {
  // Pre-collision the right shock is exactly s_B = 0.5 + 0.75 t + t^2 and the
  // left one follows the Example-1 path, so equating them gives
  // t* = 122 - sqrt(14784).
  const auto ex3 = exact_solution(3);
  REQUIRE(ex3.collision.has_value());
  const double t_star = 122.0 - std::sqrt(14784.0);
  const double x_star = 0.5 + 0.75 * t_star + t_star * t_star;
  CHECK((*ex3.collision)[0] == doctest::Approx(t_star).epsilon(1e-9));
  CHECK((*ex3.collision)[1] == doctest::Approx(x_star).epsilon(1e-9));

  // strictly inside the domain
  CHECK((*ex3.collision)[0] > 0.0);
  CHECK((*ex3.collision)[0] < 1.0);
  CHECK((*ex3.collision)[1] > -0.25);
  CHECK((*ex3.collision)[1] < 1.75);

  REQUIRE(ex3.shocks.size() == 3);
  CHECK(ex3.shocks[0].t_end() == doctest::Approx(t_star).epsilon(1e-9));
  CHECK(ex3.shocks[1].t_end() == doctest::Approx(t_star).epsilon(1e-9));
  CHECK(ex3.shocks[2].t_begin() == doctest::Approx(t_star).epsilon(1e-9));
}

TEST_CASE("oracle self-checks: PDE residual and RH condition") {
  for (int k : {1, 2, 3}) {
    const auto ex = exact_solution(k);
    const auto prob = example_spec(k);
    CHECK(oracle_pde_residual_max(ex, prob, 512, 1024, 5e-3) <= 1e-6);
    if (!ex.shocks.empty()) CHECK(oracle_rh_max(ex) <= 1e-8);
  }
}

TEST_CASE("oracle converges in its ODE tolerance") {
  for (int k : {1, 3})
    CHECK(oracle_field_l1_diff(k, 1e-10, 1e-8, 256, 512) <= 1e-6);
}

TEST_CASE("shock polyline stays close to the path") {
  const auto ex1 = exact_solution(1);
  const auto poly = ex1.shocks[0].polyline(1e-6);
  REQUIRE(poly.size() >= 2);
  for (size_t i = 0; i + 1 < poly.size(); ++i) {
    const double tm = 0.5 * (poly[i][0] + poly[i + 1][0]);
    const double chord = 0.5 * (poly[i][1] + poly[i + 1][1]);
    CHECK(std::abs(chord - ex1.shocks[0].eval(tm)) <= 2e-6);
  }
}
