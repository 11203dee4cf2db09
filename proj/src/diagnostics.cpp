#include "hyperls/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyperls {

namespace {

Vec2 perp(const Vec2& g) { return {g[1], -g[0]}; }

// Poisson solve over the free dofs of a constrained space:
//   (grad s, grad phi) = rhs_fn(phi)  (rotated form when use_perp is set)
FEField poisson_project(const VectorField& w, const FESpacePtr& space, bool use_perp,
                        int quad_degree) {
  const Mesh& mesh = *space->mesh;
  const auto rule = quadrature_rule(quad_degree ? quad_degree : 6);
  const auto tab = tabulate_basis(space->order, rule);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.n_triangles()) * tab.n_local * tab.n_local);
  Vector rhs = Vector::Zero(space->n_free);

  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const AffineMap map = affine_map(mesh, tri);
    for (int qi = 0; qi < rule.size(); ++qi) {
      const double wq = rule.weights[qi] * map.det;
      const Eigen::MatrixXd g = tab.rgrad[qi] * map.jac_inv_t.transpose();
      const Vec2 pos = map.origin + map.jac * Vec2(rule.xi(qi), rule.eta(qi));
      const Vec2 wv = w(pos[0], pos[1]);
      for (int i = 0; i < tab.n_local; ++i) {
        const int fi = space->free_index[space->dof(tri, i)];
        if (fi < 0) continue;
        const Vec2 gi = g.row(i).transpose();
        const Vec2 ti = use_perp ? perp(gi) : gi;
        rhs[fi] += wq * wv.dot(ti);
        for (int j = 0; j < tab.n_local; ++j) {
          const int fj = space->free_index[space->dof(tri, j)];
          if (fj >= 0) trips.emplace_back(fi, fj, wq * gi.dot(g.row(j).transpose()));
        }
      }
    }
  }
  CsrMatrix K(space->n_free, space->n_free);
  K.setFromTriplets(trips.begin(), trips.end());

  const Vector x = cholesky_solve(K, rhs);
  FEField out(space);
  for (int i = 0; i < space->n_free; ++i) out.coeffs[space->free_dofs[i]] = x[i];
  return out;
}

double grad_norm_sq(const FEField& a) {
  const Mesh& mesh = *a.space->mesh;
  const auto rule = quadrature_rule(4);
  const auto tab = tabulate_basis(a.space->order, rule);
  double out = 0;
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const AffineMap map = affine_map(mesh, tri);
    for (int qi = 0; qi < rule.size(); ++qi) {
      const Eigen::MatrixXd g = tab.rgrad[qi] * map.jac_inv_t.transpose();
      Vec2 gv = Vec2::Zero();
      for (int k = 0; k < tab.n_local; ++k)
        gv += a.coeffs[a.space->dof(tri, k)] * g.row(k).transpose();
      out += rule.weights[qi] * map.det * gv.squaredNorm();
    }
  }
  return out;
}

VectorField flux_of_field(const FEField& v, const Flux& flux) {
  return [&v, f = flux.f](double t, double x) { return f(v.evaluate(t, x)); };
}

// ---- shock-aware error quadrature -----------------------------------------

// A shock polyline viewed as a graph x = s(t) over an increasing t grid.
struct PolyCurve {
  std::vector<double> t, x;

  double eval(double tq) const {
    auto it = std::upper_bound(t.begin(), t.end(), tq);
    int i = std::clamp(static_cast<int>(it - t.begin()) - 1, 0,
                       static_cast<int>(t.size()) - 2);
    const double a = (tq - t[i]) / (t[i + 1] - t[i]);
    return x[i] + a * (x[i + 1] - x[i]);
  }
  double t_begin() const { return t.front(); }
  double t_end() const { return t.back(); }
};

struct TriGeom {
  Vec2 p0, p1, p2;
  double area() const {
    return 0.5 * std::abs((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                          (p2[0] - p0[0]) * (p1[1] - p0[1]));
  }
};

// side of the curve: +1 for x >= s(t), -1 otherwise; 0 only outside t-range
int curve_side(const PolyCurve& c, const Vec2& p, double pad) {
  if (p[0] < c.t_begin() - pad || p[0] > c.t_end() + pad) return 0;
  return p[1] >= c.eval(p[0]) ? 1 : -1;
}

bool curve_crosses(const PolyCurve& c, const TriGeom& g) {
  const double t_lo = std::min({g.p0[0], g.p1[0], g.p2[0]});
  const double t_hi = std::max({g.p0[0], g.p1[0], g.p2[0]});
  if (t_hi < c.t_begin() || t_lo > c.t_end()) return false;
  const int s0 = curve_side(c, g.p0, 0), s1 = curve_side(c, g.p1, 0),
            s2 = curve_side(c, g.p2, 0);
  const bool has_pos = s0 > 0 || s1 > 0 || s2 > 0;
  const bool has_neg = s0 < 0 || s1 < 0 || s2 < 0;
  return has_pos && has_neg;
}

bool point_in_tri(const TriGeom& g, const Vec2& p, double tol) {
  auto side = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
  };
  const double d = side(g.p0, g.p1, g.p2);
  const double w0 = side(g.p0, g.p1, p) / d;
  const double w1 = side(g.p1, g.p2, p) / d;
  const double w2 = side(g.p2, g.p0, p) / d;
  return w0 >= -tol && w1 >= -tol && w2 >= -tol;
}

// Clips the curve to the triangle; expects one connected piece from boundary
// to boundary. Returns false for anything more complicated.
bool clip_chain(const PolyCurve& c, const TriGeom& g, std::vector<Vec2>& chain) {
  const double t_lo = std::min({g.p0[0], g.p1[0], g.p2[0]});
  const double t_hi = std::max({g.p0[0], g.p1[0], g.p2[0]});
  // walk a fine sampling of the curve over [t_lo, t_hi] and record the
  // entry/exit by bisection against the triangle membership predicate
  const int ns = 64;
  std::vector<Vec2> pts(ns + 1);
  std::vector<bool> inside(ns + 1);
  const double ta = std::max(t_lo, c.t_begin()), tb = std::min(t_hi, c.t_end());
  if (tb <= ta) return false;
  for (int i = 0; i <= ns; ++i) {
    const double t = ta + (tb - ta) * i / ns;
    pts[i] = Vec2(t, c.eval(t));
    inside[i] = point_in_tri(g, pts[i], 1e-12);
  }
  int first = -1, last = -1;
  for (int i = 0; i <= ns; ++i)
    if (inside[i]) {
      if (first < 0) first = i;
      last = i;
    }
  if (first < 0) return false;
  for (int i = first; i <= last; ++i)
    if (!inside[i]) return false;  // disconnected piece

  auto bisect_boundary = [&](double t_in, double t_out) {
    for (int it = 0; it < 60; ++it) {
      const double tm = 0.5 * (t_in + t_out);
      if (point_in_tri(g, Vec2(tm, c.eval(tm)), 1e-12))
        t_in = tm;
      else
        t_out = tm;
    }
    return Vec2(t_in, c.eval(t_in));
  };

  chain.clear();
  double t_entry, t_exit;
  if (first == 0)
    t_entry = ta;  // curve starts on (or enters through) the lower-t side
  else
    t_entry = bisect_boundary(pts[first][0], pts[first - 1][0])[0];
  if (last == ns)
    t_exit = tb;
  else
    t_exit = bisect_boundary(pts[last][0], pts[last + 1][0])[0];
  if (t_exit - t_entry < 1e-14) return false;

  chain.push_back(Vec2(t_entry, c.eval(t_entry)));
  for (double tk : c.t)
    if (tk > t_entry + 1e-14 && tk < t_exit - 1e-14) chain.push_back(Vec2(tk, c.eval(tk)));
  chain.push_back(Vec2(t_exit, c.eval(t_exit)));
  return true;
}

// distance of p to the segment [a,b]
double seg_point_dist(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  const double s = len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (a + s * d - p).norm();
}

// Splits the triangle along the chain into two simple polygons.
bool split_by_chain(const TriGeom& g, const std::vector<Vec2>& chain,
                    std::vector<std::vector<Vec2>>& polys) {
  const Vec2 tv[3] = {g.p0, g.p1, g.p2};
  const Vec2 entry = chain.front(), exit = chain.back();

  // boundary walk with entry/exit inserted on their edges
  struct BPoint {
    Vec2 p;
    int which;  // -1 plain, 0 entry, 1 exit
  };
  std::vector<BPoint> ring;
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = tv[e], b = tv[(e + 1) % 3];
    ring.push_back({a, -1});
    struct Ins {
      double s;
      int which;
    };
    std::vector<Ins> ins;
    const double de = seg_point_dist(a, b, entry);
    const double dx = seg_point_dist(a, b, exit);
    const double edge_len = (b - a).norm();
    if (de < 1e-10 * edge_len + 1e-14) ins.push_back({(entry - a).norm() / edge_len, 0});
    if (dx < 1e-10 * edge_len + 1e-14) ins.push_back({(exit - a).norm() / edge_len, 1});
    std::sort(ins.begin(), ins.end(), [](const Ins& l, const Ins& r) { return l.s < r.s; });
    for (const auto& i : ins)
      if (i.s > 1e-12 && i.s < 1 - 1e-12) ring.push_back({i.which == 0 ? entry : exit, i.which});
      else if (i.s <= 1e-12)
        ring.back().which = i.which;  // coincides with vertex a
      else {
        // coincides with the next vertex; mark when we push it
      }
  }
  // mark ring vertices that coincide with entry/exit (vertex case)
  int ie = -1, ix = -1;
  for (size_t i = 0; i < ring.size(); ++i) {
    if (ring[i].which == 0) ie = static_cast<int>(i);
    if (ring[i].which == 1) ix = static_cast<int>(i);
  }
  if (ie < 0) {
    for (size_t i = 0; i < ring.size(); ++i)
      if ((ring[i].p - entry).norm() < 1e-12) {
        ie = static_cast<int>(i);
        break;
      }
  }
  if (ix < 0) {
    for (size_t i = 0; i < ring.size(); ++i)
      if ((ring[i].p - exit).norm() < 1e-12) {
        ix = static_cast<int>(i);
        break;
      }
  }
  if (ie < 0 || ix < 0 || ie == ix) return false;

  const int n = static_cast<int>(ring.size());
  auto arc = [&](int from, int to) {
    std::vector<Vec2> out;
    for (int i = from;; i = (i + 1) % n) {
      out.push_back(ring[i].p);
      if (i == to) break;
    }
    return out;
  };

  // polygon 1: boundary arc entry->exit plus the chain walked back
  std::vector<Vec2> poly1 = arc(ie, ix);
  for (int i = static_cast<int>(chain.size()) - 2; i >= 1; --i) poly1.push_back(chain[i]);
  // polygon 2: boundary arc exit->entry plus the chain walked forward
  std::vector<Vec2> poly2 = arc(ix, ie);
  for (size_t i = 1; i + 1 < chain.size(); ++i) poly2.push_back(chain[i]);

  polys = {std::move(poly1), std::move(poly2)};
  return true;
}

double poly_signed_area(const std::vector<Vec2>& p) {
  double a = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    a += u[0] * v[1] - u[1] * v[0];
  }
  return 0.5 * a;
}

// ear clipping for small simple polygons
bool triangulate_poly(std::vector<Vec2> poly, std::vector<TriGeom>& tris) {
  if (poly_signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());
  int guard = 0;
  while (poly.size() > 3 && guard++ < 1000) {
    const int n = static_cast<int>(poly.size());
    bool clipped = false;
    for (int i = 0; i < n; ++i) {
      const Vec2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
      const double cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
      if (cross <= 0) continue;  // reflex or degenerate
      bool contains = false;
      const TriGeom ear{a, b, c};
      for (int j = 0; j < n; ++j) {
        if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
        if (point_in_tri(ear, poly[j], -1e-12)) {
          contains = true;
          break;
        }
      }
      if (contains) continue;
      if (ear.area() > 1e-30) tris.push_back(ear);
      poly.erase(poly.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) return false;
  }
  if (poly.size() == 3) {
    const TriGeom last{poly[0], poly[1], poly[2]};
    if (last.area() > 1e-30) tris.push_back(last);
  }
  return true;
}

struct ErrAccum {
  double l2 = 0, l1 = 0;
};

template <typename UF>
void integrate_plain(const TriGeom& g, const UF& uf, const ExactSolution& exact,
                     const QuadratureRule& rule, ErrAccum& acc) {
  const double a2 = 2.0 * g.area();
  for (int qi = 0; qi < rule.size(); ++qi) {
    const Vec2 p = rule.bary(qi, 0) * g.p0 + rule.bary(qi, 1) * g.p1 + rule.bary(qi, 2) * g.p2;
    const double e = uf(p[0], p[1]) - exact.value(p[0], p[1]);
    const double w = a2 * rule.weights[qi];
    acc.l2 += w * e * e;
    acc.l1 += w * std::abs(e);
  }
}

template <typename UF>
void integrate_adaptive(const TriGeom& g, const UF& uf, const ExactSolution& exact,
                        const std::vector<const PolyCurve*>& curves,
                        const QuadratureRule& rule, int depth, ErrAccum& acc) {
  bool straddles = false;
  for (const auto* c : curves)
    if (curve_crosses(*c, g)) {
      straddles = true;
      break;
    }
  if (!straddles || depth >= 9) {
    integrate_plain(g, uf, exact, rule, acc);
    return;
  }
  const Vec2 m01 = 0.5 * (g.p0 + g.p1), m12 = 0.5 * (g.p1 + g.p2), m20 = 0.5 * (g.p2 + g.p0);
  integrate_adaptive({g.p0, m01, m20}, uf, exact, curves, rule, depth + 1, acc);
  integrate_adaptive({m01, g.p1, m12}, uf, exact, curves, rule, depth + 1, acc);
  integrate_adaptive({m20, m12, g.p2}, uf, exact, curves, rule, depth + 1, acc);
  integrate_adaptive({m01, m12, m20}, uf, exact, curves, rule, depth + 1, acc);
}

template <typename UF>
ErrorNorms error_norms_impl(const UF& uf, const Mesh& mesh, const ExactSolution& exact,
                            int quad_degree) {
  const auto rule = quadrature_rule(quad_degree);
  std::vector<PolyCurve> curves;
  for (const auto& path : exact.shocks) {
    PolyCurve c;
    for (const auto& p : path.polyline(1e-6)) {
      c.t.push_back(p[0]);
      c.x.push_back(p[1]);
    }
    if (c.t.size() >= 2) curves.push_back(std::move(c));
  }

  // triangles containing an interior path endpoint (the collision point) get
  // the adaptive treatment, as do multi-curve crossings
  std::vector<Vec2> interior_ends;
  for (const auto& path : exact.shocks)
    for (const Vec2 p : {path.start_point(), path.end_point()}) {
      const auto [t0, t1, x0, x1] = mesh.rect;
      if (p[0] > t0 + 1e-12 && p[0] < t1 - 1e-12 && p[1] > x0 + 1e-12 && p[1] < x1 - 1e-12)
        interior_ends.push_back(p);
    }

  ErrAccum acc;
  std::vector<Vec2> chain;
  std::vector<std::vector<Vec2>> polys;
  std::vector<TriGeom> sub;
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const TriGeom g{mesh.vertices.row(mesh.triangles(tri, 0)),
                    mesh.vertices.row(mesh.triangles(tri, 1)),
                    mesh.vertices.row(mesh.triangles(tri, 2))};
    std::vector<const PolyCurve*> crossing;
    for (const auto& c : curves)
      if (curve_crosses(c, g)) crossing.push_back(&c);
    bool has_end = false;
    for (const auto& p : interior_ends)
      if (point_in_tri(g, p, 1e-9)) has_end = true;

    if (crossing.empty() && !has_end) {
      integrate_plain(g, uf, exact, rule, acc);
      continue;
    }
    if (crossing.size() == 1 && !has_end) {
      bool ok = clip_chain(*crossing[0], g, chain);
      if (ok) ok = split_by_chain(g, chain, polys);
      if (ok) {
        sub.clear();
        ok = triangulate_poly(polys[0], sub) && triangulate_poly(polys[1], sub);
        if (ok) {
          double total = 0;
          for (const auto& s : sub) total += s.area();
          ok = std::abs(total - g.area()) <= 1e-9 * g.area();
        }
        if (ok) {
          for (const auto& s : sub) integrate_plain(s, uf, exact, rule, acc);
          continue;
        }
      }
    }
    std::vector<const PolyCurve*> all;
    for (const auto& c : curves) all.push_back(&c);
    integrate_adaptive(g, uf, exact, all, rule, 0, acc);
  }

  ErrorNorms out;
  out.l2_sq = acc.l2;
  out.l1 = acc.l1;
  out.l1_sq = acc.l1 * acc.l1;
  return out;
}

}  // namespace

HelmholtzParts discrete_helmholtz(const VectorField& w, const FESpacePtr& space_C,
                                  const FESpacePtr& space_I, int quad_degree) {
  HelmholtzParts out;
  out.q = poisson_project(w, space_C, false, quad_degree);
  out.psi = poisson_project(w, space_I, true, quad_degree);
  return out;
}

FEField solve_qstar(const DataFunctional& ld) {
  const auto& space = ld.space;
  // stiffness with rhs -l_d
  const Mesh& mesh = *space->mesh;
  const auto rule = quadrature_rule(4);
  const auto tab = tabulate_basis(space->order, rule);
  std::vector<Eigen::Triplet<double>> trips;
  for (int tri = 0; tri < mesh.n_triangles(); ++tri) {
    const AffineMap map = affine_map(mesh, tri);
    for (int qi = 0; qi < rule.size(); ++qi) {
      const double wq = rule.weights[qi] * map.det;
      const Eigen::MatrixXd g = tab.rgrad[qi] * map.jac_inv_t.transpose();
      for (int i = 0; i < tab.n_local; ++i) {
        const int fi = space->free_index[space->dof(tri, i)];
        if (fi < 0) continue;
        for (int j = 0; j < tab.n_local; ++j) {
          const int fj = space->free_index[space->dof(tri, j)];
          if (fj >= 0) trips.emplace_back(fi, fj, wq * g.row(i).dot(g.row(j)));
        }
      }
    }
  }
  CsrMatrix K(space->n_free, space->n_free);
  K.setFromTriplets(trips.begin(), trips.end());
  Vector rhs(space->n_free);
  for (int i = 0; i < space->n_free; ++i) rhs[i] = -ld.values[space->free_dofs[i]];
  const Vector x = cholesky_solve(K, rhs);
  FEField out(space);
  for (int i = 0; i < space->n_free; ++i) out.coeffs[space->free_dofs[i]] = x[i];
  return out;
}

double hminus1_residual(const FEField& v, const ProblemSpec& prob,
                        const FESpacePtr& space_C, int quad_degree) {
  const FEField qv = poisson_project(flux_of_field(v, prob.flux), space_C, false, quad_degree);
  const FEField qs = solve_qstar(assemble_ld(space_C, prob));
  FEField diff(space_C);
  diff.coeffs = qv.coeffs - qs.coeffs;
  return std::sqrt(grad_norm_sq(diff));
}

double reduced_functional(const FEField& v, const ProblemSpec& prob,
                          const FESpacePtr& space_C, const FESpacePtr& space_I,
                          int quad_degree) {
  const auto hh = discrete_helmholtz(flux_of_field(v, prob.flux), space_C, space_I,
                                     quad_degree);
  const FEField qs = solve_qstar(assemble_ld(space_C, prob));
  FEField p(space_C);
  p.coeffs = 0.5 * (hh.q.coeffs + qs.coeffs);
  FEField d1(space_C), d2(space_C);
  d1.coeffs = p.coeffs - hh.q.coeffs;
  d2.coeffs = p.coeffs - qs.coeffs;
  // the mu-term vanishes at the minimizer mu = psi_v
  return grad_norm_sq(d1) + grad_norm_sq(d2);
}

ErrorNorms error_norms(const FEField& u, const ExactSolution& exact, int quad_degree) {
  const Mesh& mesh = *u.space->mesh;
  return error_norms_impl([&u](double t, double x) { return u.evaluate(t, x); }, mesh, exact,
                          quad_degree);
}

ErrorNorms error_norms_fn(const std::function<double(double, double)>& u, const Mesh& mesh,
                          const ExactSolution& exact, int quad_degree) {
  return error_norms_impl(u, mesh, exact, quad_degree);
}

ConvergenceTable build_table(const std::vector<SolveReport>& reports,
                             const ExactSolution& exact) {
  ConvergenceTable table;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    ConvergenceRow row;
    row.level = r.level;
    row.h = r.h;
    const ErrorNorms e = error_norms(r.u, exact);
    row.l2_sq = e.l2_sq;
    row.l1_sq = e.l1_sq;
    row.Mh = r.M_h;
    row.iters = r.iterations;
    if (i == 0) {
      row.l2_rate = nan;
      row.l1_rate = nan;
      row.dMh = nan;
    } else {
      row.l2_rate = std::log2(table.rows[i - 1].l2_sq / row.l2_sq);
      row.l1_rate = std::log2(table.rows[i - 1].l1_sq / row.l1_sq);
      row.dMh = table.rows[i - 1].Mh - row.Mh;
    }
    table.rows.push_back(row);
  }
  return table;
}

std::optional<Vec2> extract_collision_from_field(const FEField& u,
                                                 const ProblemSpec& prob) {
  const Mesh& mesh = *u.space->mesh;
  const double h = mesh.h;
  const auto [t0, t1, x0, x1] = prob.rect;

  // front positions on one time slice: level crossings of the mid-plateau
  // value of each steep descending run
  auto slice_fronts = [&](double t) {
    const double dx = h / 8.0;
    const int n = static_cast<int>((x1 - 1e-12) / dx) + 1;
    std::vector<double> xs, us;
    for (double x = 1e-9; x < x1 - 1e-12; x += dx) {
      xs.push_back(x);
      us.push_back(u.evaluate(t, x));
    }
    // smooth against P1 shock oscillations with a short moving average
    std::vector<double> sm(us.size());
    const int w = 4;
    for (int i = 0; i < static_cast<int>(us.size()); ++i) {
      double s = 0;
      int c = 0;
      for (int j = std::max(0, i - w); j <= std::min<int>(us.size() - 1, i + w); ++j) {
        s += us[j];
        ++c;
      }
      sm[i] = s / c;
    }
    const double umax = *std::max_element(sm.begin(), sm.end());
    const double umin = *std::min_element(sm.begin(), sm.end());
    const double theta = 0.15 * (umax - umin) / (3.0 * h);  // slope threshold

    std::vector<std::pair<int, int>> runs;
    int start = -1;
    for (int i = 1; i + 1 < static_cast<int>(sm.size()); ++i) {
      const double slope = (sm[i + 1] - sm[i - 1]) / (2 * dx);
      if (slope < -theta) {
        if (start < 0) start = i;
      } else if (start >= 0) {
        runs.push_back({start, i});
        start = -1;
      }
    }
    if (start >= 0) runs.push_back({start, static_cast<int>(sm.size()) - 2});
    // merge runs separated by less than 2h
    std::vector<std::pair<int, int>> merged;
    for (const auto& r : runs) {
      if (!merged.empty() && xs[r.first] - xs[merged.back().second] < 2.0 * h)
        merged.back().second = r.second;
      else
        merged.push_back(r);
    }
    std::vector<double> fronts;
    for (const auto& r : merged) {
      const int il = std::max(0, r.first - 2 * w);
      const int ir = std::min<int>(sm.size() - 1, r.second + 2 * w);
      const double ul = sm[il], ur = sm[ir];
      if (ul - ur < 0.15 * (umax - umin)) continue;  // too shallow to be a shock
      const double mid = 0.5 * (ul + ur);
      for (int i = r.first; i <= r.second && i + 1 < static_cast<int>(sm.size()); ++i) {
        if (sm[i] >= mid && sm[i + 1] < mid) {
          const double a = (sm[i] - mid) / (sm[i] - sm[i + 1]);
          fronts.push_back(xs[i] + a * dx);
          break;
        }
      }
    }
    return fronts;
  };

  // track the two fronts while both are present
  std::vector<double> ts, xa, xb;
  const int n_slices = 4 * mesh.nt;
  for (int i = 1; i < n_slices; ++i) {
    const double t = t0 + (t1 - t0) * i / n_slices;
    const auto fronts = slice_fronts(t);
    if (fronts.size() < 2) continue;
    ts.push_back(t);
    xa.push_back(fronts.front());
    xb.push_back(fronts.back());
  }
  if (ts.size() < 6) return std::nullopt;

  // keep the trailing window where the fronts are still well separated
  std::vector<int> window;
  for (int i = 0; i < static_cast<int>(ts.size()); ++i)
    if (xb[i] - xa[i] >= 6.0 * h) window.push_back(i);
  if (window.size() < 6) return std::nullopt;
  const int wlen = std::min<int>(static_cast<int>(window.size()), 3 * mesh.nt / 4);
  window.erase(window.begin(), window.end() - wlen);

  // quadratic fits x(t) = c0 + c1 t + c2 t^2 for both fronts
  auto fit = [&](const std::vector<double>& xs_track) {
    Eigen::MatrixXd A(window.size(), 3);
    Vector rhs(window.size());
    for (size_t i = 0; i < window.size(); ++i) {
      const double t = ts[window[i]];
      A(i, 0) = 1;
      A(i, 1) = t;
      A(i, 2) = t * t;
      rhs[i] = xs_track[window[i]];
    }
    return Eigen::Vector3d((A.transpose() * A).ldlt().solve(A.transpose() * rhs));
  };
  const Eigen::Vector3d ca = fit(xa), cb = fit(xb);

  // earliest root of (ca - cb)(t) = 0 after the window start
  const Eigen::Vector3d d = ca - cb;
  const double t_lo = ts[window.front()];
  std::vector<double> roots;
  if (std::abs(d[2]) < 1e-12) {
    if (std::abs(d[1]) > 1e-12) roots.push_back(-d[0] / d[1]);
  } else {
    const double disc = d[1] * d[1] - 4 * d[2] * d[0];
    if (disc >= 0) {
      roots.push_back((-d[1] - std::sqrt(disc)) / (2 * d[2]));
      roots.push_back((-d[1] + std::sqrt(disc)) / (2 * d[2]));
    }
  }
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double r : roots)
    if (r > t_lo && (std::isnan(best) || r < best)) best = r;
  if (std::isnan(best) || best > t1) return std::nullopt;
  const double xc = ca[0] + ca[1] * best + ca[2] * best * best;
  return Vec2(best, xc);
}

}  // namespace hyperls
