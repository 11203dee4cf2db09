#include "hyperls/spaces.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hyperls;

namespace {
const std::array<double, 4> kRect{0.0, 1.0, -0.25, 1.75};

MeshPtr tagged_benchmark(int nt = 16, int nx = 32) {
  BoundarySplit s;
  s.inflow.push_back({Vec2(0.0, -0.25), Vec2(0.0, 1.75)});
  s.inflow.push_back({Vec2(0.0, -0.25), Vec2(1.0, -0.25)});
  return tag_boundary(*build_structured(nt, nx, kRect), s);
}
}  // namespace

TEST_CASE("dof and constraint counts") {
  auto m = tagged_benchmark();
  auto none = make_space(m, 1, Constraint::None);
  CHECK(none->n_dofs == 561);
  CHECK(none->n_free == 561);

  auto vc = make_space(m, 1, Constraint::OnGammaC);
  // independent enumeration of nodes on {t=1} and {x=1.75}
  int expected = 0;
  for (int v = 0; v < m->n_vertices(); ++v)
    if (m->vertices(v, 0) == 1.0 || m->vertices(v, 1) == 1.75) ++expected;
  CHECK(expected == 49);
  CHECK(static_cast<int>(vc->n_dofs - vc->n_free) == expected);

  auto unit = build_structured(1, 1, {0, 1, 0, 1});
  auto p2 = make_space(unit, 2, Constraint::None);
  CHECK(p2->n_dofs == 9);
  CHECK_THROWS(make_space(unit, 3, Constraint::None));
}

TEST_CASE("basis evaluation") {
  auto unit = build_structured(1, 1, {0, 1, 0, 1});
  auto p1 = make_space(unit, 1, Constraint::None);
  auto p2 = make_space(unit, 2, Constraint::None);

  // partition of unity and zero gradient sum at random reference points
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    double xi = unif(rng), eta = unif(rng);
    if (xi + eta > 1) {
      xi = 1 - xi;
      eta = 1 - eta;
    }
    for (const auto& s : {p1, p2})
      for (int tri = 0; tri < 2; ++tri) {
        const auto b = eval_basis(*s, tri, xi, eta);
        CHECK(b.values.head(b.n).sum() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(b.grads.topRows(b.n).colwise().sum().norm() ==
              doctest::Approx(0.0).epsilon(1e-12));
      }
  }

  // P1 is nodal: value e_i at vertex i
  for (int tri = 0; tri < 2; ++tri) {
    const double ref[3][2] = {{0, 0}, {1, 0}, {0, 1}};
    for (int i = 0; i < 3; ++i) {
      const auto b = eval_basis(*p1, tri, ref[i][0], ref[i][1]);
      for (int j = 0; j < 3; ++j)
        CHECK(b.values[j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
  }

  // analytic P1 gradients on the lower triangle (0,0),(1,0),(1,1):
  // hats are 1-t, t-x, x
  const auto b = eval_basis(*p1, 0, 0.2, 0.3);
  CHECK(b.grads(0, 0) == doctest::Approx(-1.0));
  CHECK(b.grads(0, 1) == doctest::Approx(0.0));
  CHECK(b.grads(1, 0) == doctest::Approx(1.0));
  CHECK(b.grads(1, 1) == doctest::Approx(-1.0));
  CHECK(b.grads(2, 0) == doctest::Approx(0.0));
  CHECK(b.grads(2, 1) == doctest::Approx(1.0));

  // P2 is nodal at edge midpoints
  const double mids[3][2] = {{0.5, 0}, {0.5, 0.5}, {0, 0.5}};
  for (int e = 0; e < 3; ++e) {
    const auto be = eval_basis(*p2, 0, mids[e][0], mids[e][1]);
    for (int j = 0; j < 6; ++j)
      CHECK(be.values[j] == doctest::Approx(j == 3 + e ? 1.0 : 0.0).epsilon(1e-14));
  }
}

TEST_CASE("interpolation reproduces polynomials") {
  auto m = tagged_benchmark(4, 8);
  auto p1 = make_space(m, 1, Constraint::None);
  auto p2 = make_space(m, 2, Constraint::None);

  auto c = interpolate(p1, [](double, double) { return 4.25; });
  CHECK(c.coeffs.minCoeff() == 4.25);
  CHECK(c.coeffs.maxCoeff() == 4.25);

  auto lin = interpolate(p1, [](double, double x) { return x; });
  auto quad = interpolate(p2, [](double, double x) { return x * x; });
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ut(0.0, 1.0), ux(-0.25, 1.75);
  for (int i = 0; i < 100; ++i) {
    const double t = ut(rng), x = ux(rng);
    CHECK(lin.evaluate(t, x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(quad.evaluate(t, x) == doctest::Approx(x * x).epsilon(1e-12));
  }

  // evaluation is linear in the coefficients
  FEField f(p2), g(p2);
  std::normal_distribution<double> nrm;
  for (int d = 0; d < p2->n_dofs; ++d) {
    f.coeffs[d] = nrm(rng);
    g.coeffs[d] = nrm(rng);
  }
  FEField sum(p2);
  sum.coeffs = 2.0 * f.coeffs + 3.0 * g.coeffs;
  for (int i = 0; i < 20; ++i) {
    const double t = ut(rng), x = ux(rng);
    CHECK(sum.evaluate(t, x) ==
          doctest::Approx(2.0 * f.evaluate(t, x) + 3.0 * g.evaluate(t, x)).epsilon(1e-12));
  }
}

TEST_CASE("nested transfer reproduces coarse fields") {
  auto coarse = tagged_benchmark(4, 8);
  auto fine = refine_uniform(*coarse);
  std::mt19937 rng(11);
  std::normal_distribution<double> nrm;

  for (int order : {1, 2}) {
    auto sc = make_space(coarse, order, Constraint::None);
    auto sf = make_space(fine, order, Constraint::None);
    FEField f(sc);
    for (int d = 0; d < sc->n_dofs; ++d) f.coeffs[d] = nrm(rng);
    const FEField g = transfer(f, sf);
    std::uniform_real_distribution<double> ut(0.0, 1.0), ux(-0.25, 1.75);
    for (int i = 0; i < 200; ++i) {
      const double t = ut(rng), x = ux(rng);
      CHECK(g.evaluate(t, x) == doctest::Approx(f.evaluate(t, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("discrete gradient/perp-gradient orthogonality") {
  // (grad p, perp grad mu) = 0 for p vanishing on Gamma_C and mu on Gamma_I;
  // integrands are polynomial, so exact quadrature leaves only roundoff.
  auto m = tagged_benchmark(8, 16);
  std::mt19937 rng(5);
  std::normal_distribution<double> nrm;
  for (int order : {1, 2}) {
    auto sc = make_space(m, order, Constraint::OnGammaC);
    auto si = make_space(m, order, Constraint::OnGammaI);
    FEField p(sc), mu(si);
    for (int d = 0; d < sc->n_dofs; ++d) p.coeffs[d] = nrm(rng);
    for (int d = 0; d < si->n_dofs; ++d) mu.coeffs[d] = nrm(rng);
    p.zero_constrained();
    mu.zero_constrained();

    const auto rule = quadrature_rule(4);
    double cross = 0, np = 0, nmu = 0;
    for (int tri = 0; tri < m->n_triangles(); ++tri) {
      const double area = m->signed_area(tri);
      for (int q = 0; q < rule.size(); ++q) {
        const auto bp = eval_basis(*sc, tri, rule.xi(q), rule.eta(q));
        const auto bm = eval_basis(*si, tri, rule.xi(q), rule.eta(q));
        Vec2 gp = Vec2::Zero(), gm = Vec2::Zero();
        for (int k = 0; k < bp.n; ++k) gp += p.coeffs[sc->dof(tri, k)] * bp.grads.row(k).transpose();
        for (int k = 0; k < bm.n; ++k) gm += mu.coeffs[si->dof(tri, k)] * bm.grads.row(k).transpose();
        const Vec2 pgm(gm[1], -gm[0]);
        const double w = 2.0 * area * rule.weights[q];
        cross += w * gp.dot(pgm);
        np += w * gp.squaredNorm();
        nmu += w * gm.squaredNorm();
      }
    }
    CHECK(std::abs(cross) <= 1e-10 * std::sqrt(np) * std::sqrt(nmu));
  }
}
