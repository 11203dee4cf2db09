#include "hyperls/spaces.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace hyperls {

namespace {

void ref_basis(int order, double xi, double eta, Eigen::Matrix<double, 6, 1>& v,
               Eigen::Matrix<double, 6, 2>& g) {
  const double l0 = 1.0 - xi - eta, l1 = xi, l2 = eta;
  if (order == 1) {
    v.head<3>() << l0, l1, l2;
    g.topRows<3>() << -1, -1, 1, 0, 0, 1;
    return;
  }
  v << l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
      4 * l0 * l1, 4 * l1 * l2, 4 * l2 * l0;
  // d/dxi, d/deta with dl0 = (-1,-1), dl1 = (1,0), dl2 = (0,1)
  g.row(0) << -(4 * l0 - 1), -(4 * l0 - 1);
  g.row(1) << 4 * l1 - 1, 0;
  g.row(2) << 0, 4 * l2 - 1;
  g.row(3) << 4 * (l0 - l1), -4 * l1;
  g.row(4) << 4 * l2, 4 * l1;
  g.row(5) << -4 * l2, 4 * (l0 - l2);
}

bool vertex_on_tagged_boundary(const Mesh& m, BoundaryTag tag, std::vector<char>& mark) {
  mark.assign(m.n_vertices(), 0);
  bool any = false;
  for (const auto& e : m.boundary_edges)
    if (e.tag == tag) {
      mark[e.v0] = 1;
      mark[e.v1] = 1;
      any = true;
    }
  return any;
}

}  // namespace

FESpacePtr make_space(MeshPtr mesh, int order, Constraint constraint) {
  if (order != 1 && order != 2) throw std::invalid_argument("make_space: order must be 1 or 2");
  if (constraint != Constraint::None && !mesh->split)
    throw std::invalid_argument("make_space: constrained space needs a tagged mesh");

  auto s = std::make_shared<FESpace>();
  s->mesh = mesh;
  s->order = order;
  s->constraint = constraint;
  s->n_local = order == 1 ? 3 : 6;

  const int nv = mesh->n_vertices();
  const int ntri = mesh->n_triangles();
  s->elem_dofs.setConstant(ntri, 6, -1);
  for (int t = 0; t < ntri; ++t)
    for (int k = 0; k < 3; ++k) s->elem_dofs(t, k) = mesh->triangles(t, k);

  int ndofs = nv;
  std::map<std::pair<int, int>, int> edge_ids;
  if (order == 2) {
    for (int t = 0; t < ntri; ++t)
      for (int k = 0; k < 3; ++k) {
        int a = mesh->triangles(t, k), b = mesh->triangles(t, (k + 1) % 3);
        auto key = std::minmax(a, b);
        auto [it, inserted] = edge_ids.try_emplace(key, ndofs);
        if (inserted) ++ndofs;
        s->elem_dofs(t, 3 + k) = it->second;
      }
  }
  s->n_dofs = ndofs;
  s->dof_coords.resize(ndofs, 2);
  s->dof_coords.topRows(nv) = mesh->vertices;
  if (order == 2)
    for (const auto& [key, id] : edge_ids)
      s->dof_coords.row(id) =
          0.5 * (mesh->vertices.row(key.first) + mesh->vertices.row(key.second));

  s->constrained.assign(ndofs, 0);
  if (constraint != Constraint::None) {
    const BoundaryTag tag =
        constraint == Constraint::OnGammaC ? BoundaryTag::Complement : BoundaryTag::Inflow;
    std::vector<char> vmark;
    vertex_on_tagged_boundary(*mesh, tag, vmark);
    for (int v = 0; v < nv; ++v) s->constrained[v] = vmark[v];
    if (order == 2)
      for (const auto& e : mesh->boundary_edges)
        if (e.tag == tag) {
          auto key = std::minmax(e.v0, e.v1);
          s->constrained[edge_ids.at(key)] = 1;
        }
  }

  s->free_index.assign(ndofs, -1);
  for (int d = 0; d < ndofs; ++d)
    if (!s->constrained[d]) {
      s->free_index[d] = s->n_free++;
      s->free_dofs.push_back(d);
    }
  return s;
}

BasisEval eval_basis(const FESpace& space, int tri, double xi, double eta) {
  BasisEval out;
  out.n = space.n_local;
  Eigen::Matrix<double, 6, 2> rg;
  ref_basis(space.order, xi, eta, out.values, rg);
  const AffineMap map = affine_map(*space.mesh, tri);
  out.grads = rg * map.jac_inv_t.transpose();
  return out;
}

BasisTable tabulate_basis(int order, const QuadratureRule& rule) {
  BasisTable tab;
  tab.n_local = order == 1 ? 3 : 6;
  const int nq = rule.size();
  tab.values.resize(nq, tab.n_local);
  tab.rgrad.resize(nq);
  Eigen::Matrix<double, 6, 1> v;
  Eigen::Matrix<double, 6, 2> g;
  for (int q = 0; q < nq; ++q) {
    ref_basis(order, rule.xi(q), rule.eta(q), v, g);
    tab.values.row(q) = v.head(tab.n_local).transpose();
    tab.rgrad[q] = g.topRows(tab.n_local);
  }
  return tab;
}

AffineMap affine_map(const Mesh& mesh, int tri) {
  AffineMap map;
  const auto r = mesh.triangles.row(tri);
  const Vec2 p0 = mesh.vertices.row(r[0]), p1 = mesh.vertices.row(r[1]),
             p2 = mesh.vertices.row(r[2]);
  map.origin = p0;
  map.jac.col(0) = p1 - p0;
  map.jac.col(1) = p2 - p0;
  map.det = map.jac(0, 0) * map.jac(1, 1) - map.jac(0, 1) * map.jac(1, 0);
  const double inv_det = 1.0 / map.det;
  Eigen::Matrix2d inv;
  inv << map.jac(1, 1), -map.jac(0, 1), -map.jac(1, 0), map.jac(0, 0);
  inv *= inv_det;
  map.jac_inv_t = inv.transpose();
  return map;
}

double FEField::evaluate(double t, double x) const {
  const auto loc = space->mesh->locate(t, x);
  const BasisEval b = eval_basis(*space, loc.tri, loc.xi, loc.eta);
  double val = 0;
  for (int k = 0; k < b.n; ++k) val += coeffs[space->dof(loc.tri, k)] * b.values[k];
  return val;
}

Vec2 FEField::evaluate_grad(double t, double x) const {
  const auto loc = space->mesh->locate(t, x);
  const BasisEval b = eval_basis(*space, loc.tri, loc.xi, loc.eta);
  Vec2 g = Vec2::Zero();
  for (int k = 0; k < b.n; ++k) g += coeffs[space->dof(loc.tri, k)] * b.grads.row(k).transpose();
  return g;
}

void FEField::zero_constrained() {
  for (int d = 0; d < space->n_dofs; ++d)
    if (space->constrained[d]) coeffs[d] = 0.0;
}

FEField interpolate(const FESpacePtr& space, const std::function<double(double, double)>& w) {
  FEField f(space);
  for (int d = 0; d < space->n_dofs; ++d)
    f.coeffs[d] = w(space->dof_coords(d, 0), space->dof_coords(d, 1));
  f.zero_constrained();
  return f;
}

FEField transfer(const FEField& from, const FESpacePtr& to) {
  return interpolate(to, [&from](double t, double x) { return from.evaluate(t, x); });
}

}  // namespace hyperls
