#include "hyperls/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace hyperls;

namespace {
const std::array<double, 4> kRect{0.0, 1.0, -0.25, 1.75};

BoundarySplit benchmark_split() {
  BoundarySplit s;
  s.inflow.push_back({Vec2(0.0, -0.25), Vec2(0.0, 1.75)});
  s.inflow.push_back({Vec2(0.0, -0.25), Vec2(1.0, -0.25)});
  return s;
}
}  // namespace

TEST_CASE("structured mesh counts and h") {
  auto m = build_structured(16, 32, kRect);
  CHECK(m->n_vertices() == 561);
  CHECK(m->n_triangles() == 1024);
  CHECK(m->h == doctest::Approx(1.0 / 16).epsilon(1e-15));

  auto unit = build_structured(1, 1, {0, 1, 0, 1});
  CHECK(unit->n_vertices() == 4);
  CHECK(unit->n_triangles() == 2);
  CHECK(unit->h == 1.0);

  auto m22 = build_structured(2, 2, {0, 1, 0, 1});
  CHECK(m22->n_vertices() == 9);
  CHECK(m22->n_triangles() == 8);
}

TEST_CASE("non-square cells rejected") {
  CHECK_THROWS_AS(build_structured(16, 16, kRect), GeometryError);
  CHECK_THROWS_AS(build_structured(0, 4, kRect), GeometryError);
}

TEST_CASE("refinement counts, nestedness, invariants") {
  auto m0 = build_structured(16, 32, kRect);
  auto m1 = refine_uniform(*m0);
  CHECK(m1->n_vertices() == 2145);
  CHECK(m1->n_triangles() == 4096);
  CHECK(m1->h == doctest::Approx(1.0 / 32).epsilon(1e-15));
  CHECK(m1->level == 1);

  // parent vertices keep index and exact coordinates
  for (int v = 0; v < m0->n_vertices(); ++v) {
    CHECK(m1->vertices(v, 0) == m0->vertices(v, 0));
    CHECK(m1->vertices(v, 1) == m0->vertices(v, 1));
  }

  // every parent edge midpoint appears as a child vertex
  std::set<std::pair<double, double>> child_pts;
  for (int v = 0; v < m1->n_vertices(); ++v)
    child_pts.insert({m1->vertices(v, 0), m1->vertices(v, 1)});
  for (int t = 0; t < m0->n_triangles(); ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = m0->triangles(t, k), b = m0->triangles(t, (k + 1) % 3);
      const Vec2 mid = 0.5 * (m0->vertices.row(a) + m0->vertices.row(b));
      CHECK(child_pts.count({mid[0], mid[1]}) == 1);
    }

  auto unit = build_structured(1, 1, {0, 1, 0, 1});
  auto unit2 = refine_uniform(*refine_uniform(*unit));
  CHECK(unit2->h == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(unit2->n_triangles() == 32);

  check_mesh_invariants(*m1);
  check_mesh_invariants(*unit2);
}

TEST_CASE("area and perimeter sums") {
  auto m = refine_uniform(*build_structured(16, 32, kRect));
  CHECK(m->total_area() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m->boundary_length() == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("boundary tagging") {
  auto m = tag_boundary(*build_structured(16, 32, kRect), benchmark_split());
  double inflow_len = 0, compl_len = 0;
  for (const auto& e : m->boundary_edges) {
    const double len = (m->vertices.row(e.v1) - m->vertices.row(e.v0)).norm();
    (e.tag == BoundaryTag::Inflow ? inflow_len : compl_len) += len;
  }
  CHECK(inflow_len == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(compl_len == doctest::Approx(3.0).epsilon(1e-12));

  // tags survive refinement
  auto mr = refine_uniform(*m);
  double inflow_len_r = 0;
  for (const auto& e : mr->boundary_edges)
    if (e.tag == BoundaryTag::Inflow)
      inflow_len_r += (mr->vertices.row(e.v1) - mr->vertices.row(e.v0)).norm();
  CHECK(inflow_len_r == doctest::Approx(3.0).epsilon(1e-12));

  auto base = build_structured(4, 4, {0, 1, 0, 1});
  CHECK_THROWS_AS(tag_boundary(*base, BoundarySplit{}), GeometryError);

  BoundarySplit full;
  full.inflow.push_back({Vec2(0, 0), Vec2(0, 1)});
  full.inflow.push_back({Vec2(1, 0), Vec2(1, 1)});
  full.inflow.push_back({Vec2(0, 0), Vec2(1, 0)});
  full.inflow.push_back({Vec2(0, 1), Vec2(1, 1)});
  CHECK_THROWS_AS(tag_boundary(*base, full), GeometryError);

  BoundarySplit off;
  off.inflow.push_back({Vec2(0.25, 0.25), Vec2(0.75, 0.25)});
  CHECK_THROWS_AS(tag_boundary(*base, off), GeometryError);
}

TEST_CASE("boundary edges map to their unique triangle edge") {
  auto m = build_structured(3, 5, {0, 0.6, 0, 1.0});
  for (const auto& e : m->boundary_edges) {
    const int a = m->triangles(e.tri, e.local_edge);
    const int b = m->triangles(e.tri, (e.local_edge + 1) % 3);
    CHECK(((a == e.v0 && b == e.v1) || (a == e.v1 && b == e.v0)));
  }
}

TEST_CASE("point location") {
  auto m = build_structured(4, 8, kRect);
  for (double t : {0.0, 0.13, 0.5, 0.99, 1.0})
    for (double x : {-0.25, -0.01, 0.0, 0.7, 1.75}) {
      const auto loc = m->locate(t, x);
      REQUIRE(loc.tri >= 0);
      REQUIRE(loc.tri < m->n_triangles());
      const auto r = m->triangles.row(loc.tri);
      const Vec2 p0 = m->vertices.row(r[0]), p1 = m->vertices.row(r[1]),
                 p2 = m->vertices.row(r[2]);
      const Vec2 p = p0 + loc.xi * (p1 - p0) + loc.eta * (p2 - p0);
      CHECK(p[0] == doctest::Approx(t).epsilon(1e-13));
      CHECK(p[1] == doctest::Approx(x).epsilon(1e-13));
      CHECK(loc.xi >= -1e-13);
      CHECK(loc.eta >= -1e-13);
      CHECK(loc.xi + loc.eta <= 1 + 1e-13);
    }
}
