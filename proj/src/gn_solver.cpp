#include "hyperls/gn_solver.hpp"

#include <cfloat>
#include <cmath>

namespace hyperls {

SolveReport solve_level(const ProblemSpec& prob, const FESpacePtr& space_u,
                        const FESpacePtr& space_c, const FESpacePtr& space_i,
                        const GNOptions& opts, FEField u0, FEField q0, FEField psi0) {
  const Mesh& mesh = *space_u->mesh;
  const double h = mesh.h;
  const double eps = opts.eta ? std::pow(h, *opts.eta) : 0.0;

  const int deg = opts.quad_degree
                      ? opts.quad_degree
                      : default_quad_degree(space_u->order,
                                            std::max(space_c->order, space_i->order));
  const DataFunctional ld = assemble_ld(space_c, prob, false, std::max(6, deg));

  SolveReport rep;
  rep.level = mesh.level;
  rep.h = h;
  rep.eps = eps;
  rep.u = std::move(u0);
  rep.q = std::move(q0);
  rep.psi = std::move(psi0);

  GNAssembler assembler(space_u, space_c, space_i, prob, ld, h, opts.augment, eps, deg);

  auto functional = [&](const FEField& u, const FEField& q, const FEField& psi) {
    return eval_Fhat(u, q, psi, ld, prob, h, opts.augment, eps, deg);
  };

  double f_cur = functional(rep.u, rep.q, rep.psi);
  rep.initial_functional = f_cur;
  const double f_scale = std::max(std::abs(f_cur), DBL_MIN);

  CholeskySolver chol;
  const bool direct = assembler.n_unknowns() <= opts.direct_dof_limit;

  for (int k = 0; k < opts.max_iters; ++k) {
    const GNSystem& sys = assembler.assemble(rep.u, rep.q, rep.psi);
    Vector delta;
    if (direct) {
      if (!chol.analyzed()) chol.analyze(sys.A);
      chol.factorize(sys.A);
      delta = chol.solve(sys.b);
    } else {
      delta = cg_solve(sys.A, sys.b, opts.cg_tol, opts.cg_maxit);
    }
    const double bnorm = sys.b.norm();
    const double lin_res = bnorm > 0 ? (sys.A * delta - sys.b).norm() / bnorm : 0.0;

    const double xnorm = std::sqrt(rep.u.coeffs.squaredNorm() + rep.q.coeffs.squaredNorm() +
                                   rep.psi.coeffs.squaredNorm());
    if (delta.norm() <= 1e-12 * std::max(xnorm, 1.0)) break;

    double s = 1.0;
    FEField ut = rep.u, qt = rep.q, pt = rep.psi;
    assembler.apply_update(ut, qt, pt, delta, s);
    double f_trial = functional(ut, qt, pt);
    int backtracks = 0;
    while (!(f_trial < f_cur)) {
      if (++backtracks > opts.max_backtracks) {
        rep.stalled = true;
        rep.M_h = f_cur;
        return rep;
      }
      s *= opts.shrink;
      ut = rep.u;
      qt = rep.q;
      pt = rep.psi;
      assembler.apply_update(ut, qt, pt, delta, s);
      f_trial = functional(ut, qt, pt);
    }

    rep.u = std::move(ut);
    rep.q = std::move(qt);
    rep.psi = std::move(pt);
    rep.iterations = k + 1;
    rep.log.push_back({f_trial, s, lin_res});

    const double drop = std::abs(f_cur - f_trial);
    f_cur = f_trial;
    if (drop <= opts.rel_tol * f_scale) break;
  }

  rep.M_h = f_cur;
  return rep;
}

std::vector<SolveReport> nested_iterate(const ProblemSpec& prob, const MeshPtr& coarse,
                                        int levels, int order_u, int order_v,
                                        const GNOptions& opts) {
  if (levels < 1) throw std::invalid_argument("nested_iterate: levels must be >= 1");
  if (!coarse->split) throw std::invalid_argument("nested_iterate: mesh must be tagged");

  std::vector<SolveReport> reports;
  reports.reserve(levels);
  MeshPtr mesh = coarse;
  for (int l = 0; l < levels; ++l) {
    auto su = make_space(mesh, order_u, Constraint::None);
    auto sc = make_space(mesh, order_v, Constraint::OnGammaC);
    auto si = make_space(mesh, order_v, Constraint::OnGammaI);

    FEField u0(su), q0(sc), psi0(si);
    if (l == 0) {
      const double c = inflow_mean(prob);
      u0.coeffs.setConstant(c);
    } else {
      const auto& prev = reports.back();
      u0 = transfer(prev.u, su);
      q0 = transfer(prev.q, sc);
      psi0 = transfer(prev.psi, si);
    }

    reports.push_back(
        solve_level(prob, su, sc, si, opts, std::move(u0), std::move(q0), std::move(psi0)));
    if (l + 1 < levels) mesh = refine_uniform(*mesh);
  }
  return reports;
}

}  // namespace hyperls
