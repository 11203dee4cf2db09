#include "hyperls/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace hyperls {

namespace {

constexpr double kGeomTol = 1e-12;

void fill_triangles_and_boundary(Mesh& m) {
  const int nt = m.nt, nx = m.nx;
  m.triangles.resize(2 * nt * nx, 3);
  for (int it = 0; it < nt; ++it) {
    for (int ix = 0; ix < nx; ++ix) {
      const int a = m.grid_vertex(it, ix);
      const int b = m.grid_vertex(it + 1, ix);
      const int c = m.grid_vertex(it + 1, ix + 1);
      const int d = m.grid_vertex(it, ix + 1);
      const int cell = it * nx + ix;
      m.triangles.row(2 * cell) << a, b, c;      // below the a-c diagonal
      m.triangles.row(2 * cell + 1) << a, c, d;  // above it
    }
  }

  m.boundary_edges.clear();
  m.boundary_edges.reserve(2 * (nt + nx));
  auto push = [&](int v0, int v1, int side, int tri, int local_edge) {
    BoundaryEdge e;
    e.v0 = v0;
    e.v1 = v1;
    e.side = side;
    e.tri = tri;
    e.local_edge = local_edge;
    m.boundary_edges.push_back(e);
  };
  for (int ix = 0; ix < nx; ++ix) {  // t = t0: edge (0,ix)-(0,ix+1), upper tri, edge (d,a) = local 2
    const int cell = 0 * nx + ix;
    push(m.grid_vertex(0, ix), m.grid_vertex(0, ix + 1), 0, 2 * cell + 1, 2);
  }
  for (int ix = 0; ix < nx; ++ix) {  // t = t1: lower tri of top row, edge (b,c) = local 1
    const int cell = (nt - 1) * nx + ix;
    push(m.grid_vertex(nt, ix), m.grid_vertex(nt, ix + 1), 1, 2 * cell, 1);
  }
  for (int it = 0; it < nt; ++it) {  // x = x0: lower tri, edge (a,b) = local 0
    const int cell = it * nx + 0;
    push(m.grid_vertex(it, 0), m.grid_vertex(it + 1, 0), 2, 2 * cell, 0);
  }
  for (int it = 0; it < nt; ++it) {  // x = x1: upper tri, edge (c,d) = local 1
    const int cell = it * nx + (nx - 1);
    push(m.grid_vertex(it, nx), m.grid_vertex(it + 1, nx), 3, 2 * cell + 1, 1);
  }
}

bool on_segment(const Vec2& p, const BoundarySegment& s) {
  const Vec2 d = s.b - s.a;
  const double len = d.norm();
  const Vec2 u = d / len;
  const Vec2 r = p - s.a;
  const double along = r.dot(u);
  const double off = std::abs(r[0] * u[1] - r[1] * u[0]);
  return off <= kGeomTol && along >= -kGeomTol && along <= len + kGeomTol;
}

bool on_perimeter(const Vec2& p, const std::array<double, 4>& rect) {
  const auto [t0, t1, x0, x1] = rect;
  const bool in_t = p[0] >= t0 - kGeomTol && p[0] <= t1 + kGeomTol;
  const bool in_x = p[1] >= x0 - kGeomTol && p[1] <= x1 + kGeomTol;
  if (!in_t || !in_x) return false;
  return std::abs(p[0] - t0) <= kGeomTol || std::abs(p[0] - t1) <= kGeomTol ||
         std::abs(p[1] - x0) <= kGeomTol || std::abs(p[1] - x1) <= kGeomTol;
}

}  // namespace

double Mesh::signed_area(int tri) const {
  const auto r = triangles.row(tri);
  const Vec2 p0 = vertices.row(r[0]), p1 = vertices.row(r[1]), p2 = vertices.row(r[2]);
  return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
}

double Mesh::total_area() const {
  double a = 0;
  for (int i = 0; i < n_triangles(); ++i) a += signed_area(i);
  return a;
}

double Mesh::boundary_length() const {
  double len = 0;
  for (const auto& e : boundary_edges)
    len += (vertices.row(e.v1) - vertices.row(e.v0)).norm();
  return len;
}

Mesh::Location Mesh::locate(double t, double x) const {
  auto cell_index = [](const std::vector<double>& c, double v) {
    const int n = static_cast<int>(c.size()) - 1;
    auto it = std::upper_bound(c.begin(), c.end(), v);
    int i = static_cast<int>(it - c.begin()) - 1;
    return std::clamp(i, 0, n - 1);
  };
  const int it = cell_index(t_coords, t);
  const int ix = cell_index(x_coords, x);
  const double lt = (t - t_coords[it]) / (t_coords[it + 1] - t_coords[it]);
  const double lx = (x - x_coords[ix]) / (x_coords[ix + 1] - x_coords[ix]);
  const int cell = it * nx + ix;
  Location loc;
  if (lx <= lt) {
    // lower triangle (a, b, c): p = a + xi*(b-a) + eta*(c-a) with b-a = (h,0), c-a = (h,h)
    loc.tri = 2 * cell;
    loc.eta = lx;
    loc.xi = lt - lx;
  } else {
    // upper triangle (a, c, d): c-a = (h,h), d-a = (0,h)
    loc.tri = 2 * cell + 1;
    loc.xi = lt;
    loc.eta = lx - lt;
  }
  return loc;
}

MeshPtr build_structured(int nt, int nx, const std::array<double, 4>& rect) {
  const auto [t0, t1, x0, x1] = rect;
  if (nt < 1 || nx < 1) throw GeometryError("build_structured: nt, nx must be >= 1");
  if (!(t1 > t0) || !(x1 > x0)) throw GeometryError("build_structured: empty rectangle");
  const double dt = (t1 - t0) / nt, dx = (x1 - x0) / nx;
  if (std::abs(dt - dx) > kGeomTol * std::max(std::abs(dt), std::abs(dx)))
    throw GeometryError("build_structured: cells are not square");

  auto m = std::make_shared<Mesh>();
  m->nt = nt;
  m->nx = nx;
  m->level = 0;
  m->h = dt;
  m->rect = rect;
  m->t_coords.resize(nt + 1);
  m->x_coords.resize(nx + 1);
  for (int i = 0; i <= nt; ++i) m->t_coords[i] = (i == nt) ? t1 : t0 + i * dt;
  for (int i = 0; i <= nx; ++i) m->x_coords[i] = (i == nx) ? x1 : x0 + i * dx;

  const int nv = (nt + 1) * (nx + 1);
  m->grid_ids.resize(nv);
  m->vertices.resize(nv, 2);
  for (int it = 0; it <= nt; ++it)
    for (int ix = 0; ix <= nx; ++ix) {
      const int id = it * (nx + 1) + ix;
      m->grid_ids[id] = id;
      m->vertices.row(id) << m->t_coords[it], m->x_coords[ix];
    }
  fill_triangles_and_boundary(*m);
  return m;
}

MeshPtr refine_uniform(const Mesh& parent) {
  auto m = std::make_shared<Mesh>();
  m->nt = 2 * parent.nt;
  m->nx = 2 * parent.nx;
  m->level = parent.level + 1;
  m->h = 0.5 * parent.h;
  m->rect = parent.rect;

  m->t_coords.resize(m->nt + 1);
  m->x_coords.resize(m->nx + 1);
  for (int i = 0; i <= parent.nt; ++i) m->t_coords[2 * i] = parent.t_coords[i];
  for (int i = 0; i < parent.nt; ++i)
    m->t_coords[2 * i + 1] = 0.5 * (parent.t_coords[i] + parent.t_coords[i + 1]);
  for (int i = 0; i <= parent.nx; ++i) m->x_coords[2 * i] = parent.x_coords[i];
  for (int i = 0; i < parent.nx; ++i)
    m->x_coords[2 * i + 1] = 0.5 * (parent.x_coords[i] + parent.x_coords[i + 1]);

  const int nv = (m->nt + 1) * (m->nx + 1);
  m->grid_ids.assign(nv, -1);
  int next_id = parent.n_vertices();
  for (int it = 0; it <= m->nt; ++it)
    for (int ix = 0; ix <= m->nx; ++ix) {
      const int pos = it * (m->nx + 1) + ix;
      if (it % 2 == 0 && ix % 2 == 0)
        m->grid_ids[pos] = parent.grid_vertex(it / 2, ix / 2);
      else
        m->grid_ids[pos] = next_id++;
    }
  m->vertices.resize(nv, 2);
  for (int it = 0; it <= m->nt; ++it)
    for (int ix = 0; ix <= m->nx; ++ix)
      m->vertices.row(m->grid_ids[it * (m->nx + 1) + ix]) << m->t_coords[it], m->x_coords[ix];

  fill_triangles_and_boundary(*m);
  if (parent.split) {
    auto tagged = tag_boundary(*m, *parent.split);
    return tagged;
  }
  return m;
}

MeshPtr tag_boundary(const Mesh& mesh, const BoundarySplit& split) {
  if (split.inflow.empty())
    throw GeometryError("tag_boundary: Gamma_I must have nonzero curve measure");
  double inflow_len = 0;
  for (const auto& s : split.inflow) {
    if (!on_perimeter(s.a, mesh.rect) || !on_perimeter(s.b, mesh.rect))
      throw GeometryError("tag_boundary: segment endpoint not on the rectangle perimeter");
    const Vec2 d = s.b - s.a;
    if (std::abs(d[0]) > kGeomTol && std::abs(d[1]) > kGeomTol)
      throw GeometryError("tag_boundary: segment is not axis-aligned");
    if (d.norm() <= kGeomTol) throw GeometryError("tag_boundary: zero-length segment");
    inflow_len += d.norm();
  }

  auto m = std::make_shared<Mesh>(mesh);
  m->split = split;
  double tagged_len = 0;
  for (auto& e : m->boundary_edges) {
    const Vec2 p0 = m->vertices.row(e.v0), p1 = m->vertices.row(e.v1);
    const Vec2 mid = 0.5 * (p0 + p1);
    bool in0 = false, in1 = false, inm = false;
    for (const auto& s : split.inflow) {
      in0 = in0 || on_segment(p0, s);
      in1 = in1 || on_segment(p1, s);
      inm = inm || on_segment(mid, s);
    }
    if (inm && (!in0 || !in1))
      throw GeometryError("tag_boundary: boundary edge straddles a segment endpoint");
    e.tag = (in0 && in1 && inm) ? BoundaryTag::Inflow : BoundaryTag::Complement;
    if (e.tag == BoundaryTag::Inflow) tagged_len += (p1 - p0).norm();
  }
  if (tagged_len <= kGeomTol)
    throw GeometryError("tag_boundary: no boundary edge lies on Gamma_I");
  if (m->boundary_length() - tagged_len <= kGeomTol)
    throw GeometryError("tag_boundary: Gamma_C is empty");
  return m;
}

void check_mesh_invariants(const Mesh& m) {
  for (int i = 0; i < m.n_triangles(); ++i)
    if (m.signed_area(i) <= 0) throw GeometryError("triangle with non-positive area");

  // Interior edges in exactly 2 triangles, boundary edges in exactly 1.
  std::map<std::pair<int, int>, int> count;
  for (int i = 0; i < m.n_triangles(); ++i)
    for (int k = 0; k < 3; ++k) {
      int a = m.triangles(i, k), b = m.triangles(i, (k + 1) % 3);
      if (a > b) std::swap(a, b);
      count[{a, b}]++;
    }
  for (const auto& e : m.boundary_edges) {
    int a = e.v0, b = e.v1;
    if (a > b) std::swap(a, b);
    auto it = count.find({a, b});
    if (it == count.end() || it->second != 1)
      throw GeometryError("boundary edge not in exactly one triangle");
    it->second = -1;  // mark visited
  }
  for (const auto& [key, c] : count)
    if (c != -1 && c != 2) throw GeometryError("interior edge not in exactly two triangles");
}

}  // namespace hyperls
