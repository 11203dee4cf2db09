#include "hyperls/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <stdexcept>

namespace hyperls {

namespace {

Vec2 perp(const Vec2& g) { return {g[1], -g[0]}; }

Vec2 side_normal(int side) {
  switch (side) {
    case 0: return {-1.0, 0.0};
    case 1: return {1.0, 0.0};
    case 2: return {0.0, -1.0};
    default: return {0.0, 1.0};
  }
}

// Visits quadrature points of every Gamma_I edge, splitting an edge at any
// declared inflow jump point that falls strictly inside it. The callback gets
// the edge, the physical point, the arclength weight, the outward normal, and
// the reference coordinates of the point in the incident triangle.
template <typename F>
void for_each_inflow_point(const Mesh& mesh, const ProblemSpec& prob, const EdgeRule& rule,
                           F&& f) {
  static bool warned = false;
  const Eigen::Matrix<double, 3, 2> ref_verts =
      (Eigen::Matrix<double, 3, 2>() << 0, 0, 1, 0, 0, 1).finished();
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::Inflow) continue;
    const Vec2 p0 = mesh.vertices.row(e.v0), p1 = mesh.vertices.row(e.v1);
    const Vec2 d = p1 - p0;
    const double len = d.norm();
    const Vec2 n = side_normal(e.side);

    std::vector<double> cuts{0.0, 1.0};
    for (const auto& jp : prob.inflow_jump_points) {
      const Vec2 r = jp - p0;
      const double off = std::abs(r[0] * d[1] - r[1] * d[0]) / len;
      if (off > 1e-12) continue;
      const double s = r.dot(d) / (len * len);
      if (s > 1e-12 && s < 1.0 - 1e-12) {
        if (!warned) {
          std::cerr << "hyperls: inflow jump point inside a boundary edge; "
                       "splitting the edge integral at it\n";
          warned = true;
        }
        cuts.push_back(s);
      }
    }
    std::sort(cuts.begin(), cuts.end());

    const int a = e.local_edge, bloc = (a + 1) % 3;
    const bool fwd = mesh.triangles(e.tri, a) == e.v0;
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double s0 = cuts[c], s1 = cuts[c + 1];
      for (int qi = 0; qi < rule.points.size(); ++qi) {
        const double s = s0 + (s1 - s0) * rule.points[qi];
        const double w = len * (s1 - s0) * rule.weights[qi];
        const Vec2 pos = p0 + s * d;
        const double sl = fwd ? s : 1.0 - s;
        const Vec2 ref = ref_verts.row(a).transpose() +
                         sl * (ref_verts.row(bloc) - ref_verts.row(a)).transpose();
        f(e, pos, w, n, ref[0], ref[1]);
      }
    }
  }
}

void check_no_source_straddle(const Mesh& mesh, const ProblemSpec& prob) {
  for (double c : prob.source_jump_lines) {
    for (int t = 0; t < mesh.n_triangles(); ++t) {
      double lo = 1e300, hi = -1e300;
      for (int k = 0; k < 3; ++k) {
        const double x = mesh.vertices(mesh.triangles(t, k), 1);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      if (lo < c - 1e-12 && hi > c + 1e-12)
        throw std::runtime_error("assemble_ld: triangle straddles a source jump line");
    }
  }
}

struct ParityData {
  std::vector<Eigen::MatrixXd> gu, gv;  // physical gradients per qp
  Vector w;                             // area-scaled weights
};

// All lower (and all upper) triangles of the structured mesh are congruent,
// so the physical gradient tables depend only on the triangle parity.
std::array<ParityData, 2> make_parity_tables(const Mesh& mesh, const QuadratureRule& rule,
                                             const BasisTable& tu, const BasisTable& tv) {
  std::array<ParityData, 2> out;
  for (int par = 0; par < 2; ++par) {
    const AffineMap map = affine_map(mesh, par);
    auto& p = out[par];
    p.w = rule.weights * map.det;
    p.gu.resize(rule.size());
    p.gv.resize(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      p.gu[q] = tu.rgrad[q] * map.jac_inv_t.transpose();
      p.gv[q] = tv.rgrad[q] * map.jac_inv_t.transpose();
    }
  }
  return out;
}

}  // namespace

int default_quad_degree(int order_u, int order_v) {
  if (order_u == 2) return 8;
  return order_v == 2 ? 6 : 4;
}

DataFunctional assemble_ld(const FESpacePtr& space_C, const ProblemSpec& prob,
                           bool include_constrained_rows, int quad_degree) {
  const Mesh& mesh = *space_C->mesh;
  check_no_source_straddle(mesh, prob);

  DataFunctional ld;
  ld.space = space_C;
  ld.values = Vector::Zero(space_C->n_dofs);

  const auto rule = quadrature_rule(quad_degree ? quad_degree : 6);
  const auto tab = tabulate_basis(space_C->order, rule);
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const AffineMap map = affine_map(mesh, tri);
    for (int q = 0; q < rule.size(); ++q) {
      const Vec2 pos = map.origin + map.jac * Vec2(rule.xi(q), rule.eta(q));
      const double w = rule.weights[q] * map.det;
      const double r = prob.source(pos[0], pos[1]);
      for (int k = 0; k < tab.n_local; ++k)
        ld.values[space_C->dof(tri, k)] += w * r * tab.values(q, k);
    }
  }

  const auto erule = edge_rule(9);
  for_each_inflow_point(
      mesh, prob, erule,
      [&](const BoundaryEdge& e, const Vec2& pos, double w, const Vec2& n, double xi,
          double eta) {
        const Vec2 fg = prob.flux.f(prob.inflow(pos[0], pos[1]));
        const auto b = eval_basis(*space_C, e.tri, xi, eta);
        const double fn = fg.dot(n);
        for (int k = 0; k < b.n; ++k)
          ld.values[space_C->dof(e.tri, k)] -= w * fn * b.values[k];
      });

  if (!include_constrained_rows)
    for (int dof = 0; dof < space_C->n_dofs; ++dof)
      if (space_C->constrained[dof]) ld.values[dof] = 0.0;
  return ld;
}

FhatBreakdown eval_Fhat_parts(const FEField& u, const FEField& q, const FEField& psi,
                              const DataFunctional& ld, const ProblemSpec& prob,
                              int quad_degree) {
  const auto& su = *u.space;
  const auto& sc = *q.space;
  const auto& si = *psi.space;
  if (su.mesh != sc.mesh || su.mesh != si.mesh)
    throw std::invalid_argument("eval_Fhat: fields live on different meshes");
  const Mesh& mesh = *su.mesh;

  const int deg = quad_degree ? quad_degree
                              : default_quad_degree(su.order, std::max(sc.order, si.order));
  const auto rule = quadrature_rule(deg);
  const auto tu = tabulate_basis(su.order, rule);
  const auto tv = tabulate_basis(sc.order, rule);
  const auto parity = make_parity_tables(mesh, rule, tu, tv);

  FhatBreakdown out;
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const auto& par = parity[tri & 1];
    for (int nq = rule.size(), qi = 0; qi < nq; ++qi) {
      double uval = 0;
      Vec2 gq = Vec2::Zero(), gpsi = Vec2::Zero();
      for (int k = 0; k < tu.n_local; ++k)
        uval += u.coeffs[su.dof(tri, k)] * tu.values(qi, k);
      for (int k = 0; k < tv.n_local; ++k) {
        gq += q.coeffs[sc.dof(tri, k)] * par.gv[qi].row(k).transpose();
        gpsi += psi.coeffs[si.dof(tri, k)] * par.gv[qi].row(k).transpose();
      }
      const Vec2 res = prob.flux.f(uval) - gq - perp(gpsi);
      const double w = par.w[qi];
      out.residual_sq += w * res.squaredNorm();
      out.gradq_sq += w * gq.squaredNorm();
      out.perp_psi_sq += w * gpsi.squaredNorm();
    }
  }
  out.ld_dot = ld(q);

  const auto erule = edge_rule(9);
  for_each_inflow_point(mesh, prob, erule,
                        [&](const BoundaryEdge& e, const Vec2& pos, double w, const Vec2&,
                            double xi, double eta) {
                          const auto b = eval_basis(su, e.tri, xi, eta);
                          double uval = 0;
                          for (int k = 0; k < b.n; ++k)
                            uval += u.coeffs[su.dof(e.tri, k)] * b.values[k];
                          const double diff = uval - prob.inflow(pos[0], pos[1]);
                          out.boundary_sq += w * diff * diff;
                        });
  return out;
}

double eval_Fhat(const FEField& u, const FEField& q, const FEField& psi,
                 const DataFunctional& ld, const ProblemSpec& prob, double h, bool augment,
                 double eps, int quad_degree) {
  return eval_Fhat_parts(u, q, psi, ld, prob, quad_degree).total(augment, h, eps);
}

GNAssembler::GNAssembler(FESpacePtr space_u, FESpacePtr space_c, FESpacePtr space_i,
                         const ProblemSpec& prob, DataFunctional ld, double h, bool augment,
                         double eps, int quad_degree)
    : su_(std::move(space_u)),
      sc_(std::move(space_c)),
      si_(std::move(space_i)),
      prob_(prob),
      ld_(std::move(ld)),
      h_(h),
      augment_(augment),
      eps_(eps) {
  if (su_->mesh != sc_->mesh || su_->mesh != si_->mesh)
    throw std::invalid_argument("GNAssembler: spaces live on different meshes");
  if (sc_->order != si_->order)
    throw std::invalid_argument("GNAssembler: the two decomposition spaces must match order");
  const int deg = quad_degree
                      ? quad_degree
                      : default_quad_degree(su_->order, std::max(sc_->order, si_->order));
  rule_ = quadrature_rule(deg);
  tab_u_ = tabulate_basis(su_->order, rule_);
  tab_v_ = tabulate_basis(sc_->order, rule_);
  const auto parity = make_parity_tables(*su_->mesh, rule_, tab_u_, tab_v_);
  for (int par = 0; par < 2; ++par) {
    parity_[par].gu = parity[par].gu;
    parity_[par].gv = parity[par].gv;
    parity_[par].w = parity[par].w;
  }

  system_.offsets = {0, su_->n_free, su_->n_free + sc_->n_free,
                     su_->n_free + sc_->n_free + si_->n_free};
  build_pattern();
  assemble_static();
}

void GNAssembler::build_pattern() {
  const Mesh& mesh = *su_->mesh;
  const int ntri = mesh.n_triangles();
  const int N = system_.offsets[3];

  const FESpace* spaces[3] = {su_.get(), sc_.get(), si_.get()};

  // dof -> incident elements, per space
  std::array<std::vector<int>, 3> inc_off, inc;
  for (int s = 0; s < 3; ++s) {
    const auto& sp = *spaces[s];
    inc_off[s].assign(sp.n_dofs + 1, 0);
    for (int e = 0; e < ntri; ++e)
      for (int k = 0; k < sp.n_local; ++k) ++inc_off[s][sp.dof(e, k) + 1];
    for (int d = 0; d < sp.n_dofs; ++d) inc_off[s][d + 1] += inc_off[s][d];
    inc[s].resize(inc_off[s].back());
    std::vector<int> cursor(inc_off[s].begin(), inc_off[s].end() - 1);
    for (int e = 0; e < ntri; ++e)
      for (int k = 0; k < sp.n_local; ++k) inc[s][cursor[sp.dof(e, k)]++] = e;
  }

  std::vector<int> outer(N + 1, 0);
  std::vector<int> inner;
  inner.reserve(static_cast<size_t>(N) * 24);
  std::vector<int> cols;
  for (int row = 0; row < N; ++row) {
    const int s = row < system_.offsets[1] ? 0 : (row < system_.offsets[2] ? 1 : 2);
    const int dof = spaces[s]->free_dofs[row - system_.offsets[s]];
    cols.clear();
    for (int ii = inc_off[s][dof]; ii < inc_off[s][dof + 1]; ++ii) {
      const int e = inc[s][ii];
      for (int s2 = 0; s2 < 3; ++s2) {
        const auto& sp2 = *spaces[s2];
        for (int k = 0; k < sp2.n_local; ++k) {
          const int fi = sp2.free_index[sp2.dof(e, k)];
          if (fi >= 0) cols.push_back(system_.offsets[s2] + fi);
        }
      }
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    inner.insert(inner.end(), cols.begin(), cols.end());
    outer[row + 1] = static_cast<int>(inner.size());
  }

  std::vector<double> zeros(inner.size(), 0.0);
  system_.A = Eigen::Map<const CsrMatrix>(N, N, static_cast<int>(inner.size()), outer.data(),
                                          inner.data(), zeros.data());
  system_.b = Vector::Zero(N);
}

void GNAssembler::add_at(int row, int col, double value) {
  const int* inner = system_.A.innerIndexPtr();
  const int* outer = system_.A.outerIndexPtr();
  const int* lo = inner + outer[row];
  const int* hi = inner + outer[row + 1];
  const int* it = std::lower_bound(lo, hi, col);
  system_.A.valuePtr()[it - inner] += value;
}

void GNAssembler::assemble_static() {
  const Mesh& mesh = *su_->mesh;
  const int nv = tab_v_.n_local;
  std::fill(system_.A.valuePtr(), system_.A.valuePtr() + system_.A.nonZeros(), 0.0);

  Eigen::MatrixXd B(nv, nv), C(nv, nv);
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const auto& par = parity_[tri & 1];
    B.setZero();
    C.setZero();
    for (int qi = 0; qi < rule_.size(); ++qi) {
      const auto& g = par.gv[qi];
      const double w = par.w[qi];
      for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j) {
          B(i, j) += w * (g(i, 0) * g(j, 0) + g(i, 1) * g(j, 1));
          C(i, j) += w * (g(i, 0) * g(j, 1) - g(i, 1) * g(j, 0));
        }
    }
    for (int i = 0; i < nv; ++i) {
      const int qi_free = sc_->free_index[sc_->dof(tri, i)];
      const int pi_free = si_->free_index[si_->dof(tri, i)];
      for (int j = 0; j < nv; ++j) {
        const int qj_free = sc_->free_index[sc_->dof(tri, j)];
        const int pj_free = si_->free_index[si_->dof(tri, j)];
        if (qi_free >= 0 && qj_free >= 0)
          add_at(system_.offsets[1] + qi_free, system_.offsets[1] + qj_free, 2.0 * B(i, j));
        if (pi_free >= 0 && pj_free >= 0)
          add_at(system_.offsets[2] + pi_free, system_.offsets[2] + pj_free,
                 (1.0 + eps_ * eps_) * B(i, j));
        if (qi_free >= 0 && pj_free >= 0) {
          add_at(system_.offsets[1] + qi_free, system_.offsets[2] + pj_free, C(i, j));
          add_at(system_.offsets[2] + pj_free, system_.offsets[1] + qi_free, C(i, j));
        }
      }
    }
  }

  if (augment_) {
    const auto erule = edge_rule(9);
    for_each_inflow_point(mesh, prob_, erule,
                          [&](const BoundaryEdge& e, const Vec2&, double w, const Vec2&,
                              double xi, double eta) {
                            const auto b = eval_basis(*su_, e.tri, xi, eta);
                            for (int i = 0; i < b.n; ++i) {
                              const int fi = su_->free_index[su_->dof(e.tri, i)];
                              if (fi < 0) continue;
                              for (int j = 0; j < b.n; ++j) {
                                const int fj = su_->free_index[su_->dof(e.tri, j)];
                                if (fj >= 0)
                                  add_at(fi, fj, h_ * w * b.values[i] * b.values[j]);
                              }
                            }
                          });
  }

  static_values_.assign(system_.A.valuePtr(), system_.A.valuePtr() + system_.A.nonZeros());
  static_ready_ = true;
}

const GNSystem& GNAssembler::assemble(const FEField& u, const FEField& q,
                                      const FEField& psi) {
  const Mesh& mesh = *su_->mesh;
  const int nu = tab_u_.n_local, nv = tab_v_.n_local;
  std::memcpy(system_.A.valuePtr(), static_values_.data(),
              static_values_.size() * sizeof(double));
  system_.b.setZero();

  Eigen::MatrixXd Kuu(nu, nu), Kuq(nu, nv), Kup(nu, nv);
  Vector ru(nu), rq(nv), rp(nv);
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const auto& par = parity_[tri & 1];
    Kuu.setZero();
    Kuq.setZero();
    Kup.setZero();
    ru.setZero();
    rq.setZero();
    rp.setZero();
    for (int qi = 0; qi < rule_.size(); ++qi) {
      double uval = 0;
      Vec2 gq = Vec2::Zero(), gpsi = Vec2::Zero();
      for (int k = 0; k < nu; ++k) uval += u.coeffs[su_->dof(tri, k)] * tab_u_.values(qi, k);
      for (int k = 0; k < nv; ++k) {
        gq += q.coeffs[sc_->dof(tri, k)] * par.gv[qi].row(k).transpose();
        gpsi += psi.coeffs[si_->dof(tri, k)] * par.gv[qi].row(k).transpose();
      }
      const Vec2 fp = prob_.flux.fprime(uval);
      const Vec2 res = prob_.flux.f(uval) - gq - perp(gpsi);
      const double w = par.w[qi];
      const double fp2 = fp.squaredNorm();
      const auto& gv = par.gv[qi];

      for (int i = 0; i < nu; ++i) {
        const double phi_i = tab_u_.values(qi, i);
        for (int j = 0; j < nu; ++j)
          Kuu(i, j) += w * fp2 * phi_i * tab_u_.values(qi, j);
        for (int j = 0; j < nv; ++j) {
          const double fg = fp[0] * gv(j, 0) + fp[1] * gv(j, 1);
          const double fgp = fp[0] * gv(j, 1) - fp[1] * gv(j, 0);  // fp . perp(grad)
          Kuq(i, j) -= w * fg * phi_i;
          Kup(i, j) -= w * fgp * phi_i;
        }
        ru[i] -= w * res.dot(fp) * phi_i;
      }
      const Vec2 rmq = res - gq;
      for (int i = 0; i < nv; ++i) {
        rq[i] += w * (rmq[0] * gv(i, 0) + rmq[1] * gv(i, 1));
        rp[i] += w * (res[0] * gv(i, 1) - res[1] * gv(i, 0));
        if (eps_ > 0)
          rp[i] -= w * eps_ * eps_ * (gpsi[0] * gv(i, 0) + gpsi[1] * gv(i, 1));
      }
    }

    for (int i = 0; i < nu; ++i) {
      const int ui = su_->free_index[su_->dof(tri, i)];
      if (ui < 0) continue;
      system_.b[ui] += ru[i];
      for (int j = 0; j < nu; ++j) {
        const int uj = su_->free_index[su_->dof(tri, j)];
        if (uj >= 0) add_at(ui, uj, Kuu(i, j));
      }
      for (int j = 0; j < nv; ++j) {
        const int qj = sc_->free_index[sc_->dof(tri, j)];
        const int pj = si_->free_index[si_->dof(tri, j)];
        if (qj >= 0) {
          add_at(ui, system_.offsets[1] + qj, Kuq(i, j));
          add_at(system_.offsets[1] + qj, ui, Kuq(i, j));
        }
        if (pj >= 0) {
          add_at(ui, system_.offsets[2] + pj, Kup(i, j));
          add_at(system_.offsets[2] + pj, ui, Kup(i, j));
        }
      }
    }
    for (int i = 0; i < nv; ++i) {
      const int qi_free = sc_->free_index[sc_->dof(tri, i)];
      const int pi_free = si_->free_index[si_->dof(tri, i)];
      if (qi_free >= 0) system_.b[system_.offsets[1] + qi_free] += rq[i];
      if (pi_free >= 0) system_.b[system_.offsets[2] + pi_free] += rp[i];
    }
  }

  // data functional on the q test block
  for (int d = 0; d < sc_->n_dofs; ++d) {
    const int fi = sc_->free_index[d];
    if (fi >= 0) system_.b[system_.offsets[1] + fi] -= ld_.values[d];
  }

  if (augment_) {
    const auto erule = edge_rule(9);
    for_each_inflow_point(*su_->mesh, prob_, erule,
                          [&](const BoundaryEdge& e, const Vec2& pos, double w, const Vec2&,
                              double xi, double eta) {
                            const auto b = eval_basis(*su_, e.tri, xi, eta);
                            double uval = 0;
                            for (int k = 0; k < b.n; ++k)
                              uval += u.coeffs[su_->dof(e.tri, k)] * b.values[k];
                            const double diff = prob_.inflow(pos[0], pos[1]) - uval;
                            for (int i = 0; i < b.n; ++i) {
                              const int fi = su_->free_index[su_->dof(e.tri, i)];
                              if (fi >= 0) system_.b[fi] += h_ * w * diff * b.values[i];
                            }
                          });
  }
  return system_;
}

void GNAssembler::apply_update(FEField& u, FEField& q, FEField& psi, const Vector& delta,
                               double step) const {
  for (int i = 0; i < su_->n_free; ++i) u.coeffs[su_->free_dofs[i]] += step * delta[i];
  for (int i = 0; i < sc_->n_free; ++i)
    q.coeffs[sc_->free_dofs[i]] += step * delta[system_.offsets[1] + i];
  for (int i = 0; i < si_->n_free; ++i)
    psi.coeffs[si_->free_dofs[i]] += step * delta[system_.offsets[2] + i];
}

GNSystem assemble_gn(const FEField& u, const FEField& q, const FEField& psi,
                     const DataFunctional& ld, const ProblemSpec& prob, double h,
                     bool augment, double eps, int quad_degree) {
  GNAssembler assembler(u.space, q.space, psi.space, prob, ld, h, augment, eps, quad_degree);
  return assembler.assemble(u, q, psi);
}

}  // namespace hyperls
