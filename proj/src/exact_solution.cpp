#include "hyperls/exact_solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyperls {

namespace {

int find_interval(const std::vector<double>& t, double tq) {
  auto it = std::upper_bound(t.begin(), t.end(), tq);
  int i = static_cast<int>(it - t.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(t.size()) - 2);
}

double hermite(double t0, double t1, double y0, double y1, double d0, double d1, double tq) {
  const double dt = t1 - t0;
  const double u = (tq - t0) / dt;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * dt * d0 +
         (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * dt * d1;
}

double hermite_deriv(double t0, double t1, double y0, double y1, double d0, double d1,
                     double tq) {
  const double dt = t1 - t0;
  const double u = (tq - t0) / dt;
  const double u2 = u * u;
  return ((6 * u2 - 6 * u) * y0 + (3 * u2 - 4 * u + 1) * dt * d0 +
          (-6 * u2 + 6 * u) * y1 + (3 * u2 - 2 * u) * dt * d1) /
         dt;
}

// Characteristic families for r = 1 (x <= 0), r = 2 (x > 0). Left of the
// source jump all characteristics (feet on t = 0 and on the inflow side)
// carry u = u0l + t; a characteristic crossing x = 0 at time tc continues as
// x = (u0l + tc)(t - tc) + (t - tc)^2, whose inversion collapses to a linear
// equation for tau = t - tc.
double left_state(double u0l, double t) { return u0l + t; }

double crossed_state(double u0l, double t, double x) {
  const double tau = x / (u0l + t);
  return u0l + (t - tau) + 2.0 * tau;
}

double uniform_state(double u0, double t) { return u0 + 2.0 * t; }

// Dormand-Prince 5(4) with dense node output. Stops when s crosses x_stop or
// t reaches t_max (bisecting the last Hermite segment onto the event).
struct OdeResult {
  ShockPath path;
  bool exited = false;  // reached x_stop before t_max
};

OdeResult integrate_shock(const std::function<double(double, double)>& rhs, double t0,
                          double s0, double t_max, double x_stop, double tol,
                          double max_step) {
  static const double c2 = 1. / 5, c3 = 3. / 10, c4 = 4. / 5, c5 = 8. / 9;
  static const double a21 = 1. / 5;
  static const double a31 = 3. / 40, a32 = 9. / 40;
  static const double a41 = 44. / 45, a42 = -56. / 15, a43 = 32. / 9;
  static const double a51 = 19372. / 6561, a52 = -25360. / 2187, a53 = 64448. / 6561,
                      a54 = -212. / 729;
  static const double a61 = 9017. / 3168, a62 = -355. / 33, a63 = 46732. / 5247,
                      a64 = 49. / 176, a65 = -5103. / 18656;
  static const double b1 = 35. / 384, b3 = 500. / 1113, b4 = 125. / 192,
                      b5 = -2187. / 6784, b6 = 11. / 84;
  static const double e1 = 5179. / 57600, e3 = 7571. / 16695, e4 = 393. / 640,
                      e5 = -92097. / 339200, e6 = 187. / 2100, e7 = 1. / 40;

  OdeResult out;
  ShockPath& p = out.path;
  double t = t0, s = s0;
  double k1 = rhs(t, s);
  p.t.push_back(t);
  p.s.push_back(s);
  p.sd.push_back(k1);

  double h = std::min(max_step, 1e-4);
  while (t < t_max) {
    h = std::min({h, max_step, t_max - t});
    const double k2 = rhs(t + c2 * h, s + h * a21 * k1);
    const double k3 = rhs(t + c3 * h, s + h * (a31 * k1 + a32 * k2));
    const double k4 = rhs(t + c4 * h, s + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = rhs(t + c5 * h, s + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        rhs(t + h, s + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double s5 = s + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = rhs(t + h, s5);
    const double s4 =
        s + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err = std::abs(s5 - s4);
    const double scale = tol * (1.0 + std::abs(s));
    if (err <= scale) {
      t += h;
      s = s5;
      k1 = k7;  // first-same-as-last
      p.t.push_back(t);
      p.s.push_back(s);
      p.sd.push_back(k1);
      if (s >= x_stop) break;
    }
    const double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(scale / err, 0.2), 0.2, 5.0);
    h = std::max(factor * h, 1e-14);
  }

  if (p.s.back() >= x_stop) {
    // bisect the last segment for the exit time
    const int n = static_cast<int>(p.t.size());
    double lo = p.t[n - 2], hi = p.t[n - 1];
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      (p.eval(mid) >= x_stop ? hi : lo) = mid;
    }
    const double te = 0.5 * (lo + hi);
    p.t[n - 1] = te;
    p.s[n - 1] = x_stop;
    p.sd[n - 1] = rhs(te, x_stop);
    out.exited = true;
  }
  return out;
}

void truncate_path(ShockPath& p, double t_cut, const std::function<double(double, double)>& rhs) {
  const double s_cut = p.eval(t_cut);
  while (p.t.size() > 1 && p.t.back() >= t_cut) {
    p.t.pop_back();
    p.s.pop_back();
    p.sd.pop_back();
  }
  p.t.push_back(t_cut);
  p.s.push_back(s_cut);
  p.sd.push_back(rhs(t_cut, s_cut));
}

void polyline_refine(const ShockPath& p, double t0, double t1, double tol,
                     std::vector<Vec2>& out) {
  const double tm = 0.5 * (t0 + t1);
  const double sm = p.eval(tm);
  const double chord = 0.5 * (p.eval(t0) + p.eval(t1));
  if (std::abs(sm - chord) > tol && t1 - t0 > 1e-12) {
    polyline_refine(p, t0, tm, tol, out);
    polyline_refine(p, tm, t1, tol, out);
  } else {
    out.push_back({t1, p.eval(t1)});
  }
}

}  // namespace

double ShockPath::eval(double tq) const {
  const int i = find_interval(t, tq);
  return hermite(t[i], t[i + 1], s[i], s[i + 1], sd[i], sd[i + 1], tq);
}

double ShockPath::eval_deriv(double tq) const {
  const int i = find_interval(t, tq);
  return hermite_deriv(t[i], t[i + 1], s[i], s[i + 1], sd[i], sd[i + 1], tq);
}

std::vector<Vec2> ShockPath::polyline(double sagitta_tol) const {
  std::vector<Vec2> out;
  out.push_back(start_point());
  for (size_t i = 0; i + 1 < t.size(); ++i)
    polyline_refine(*this, t[i], t[i + 1], sagitta_tol, out);
  return out;
}

ExactSolution exact_solution(int k, double ode_tol) {
  if (k < 1 || k > 3) throw std::invalid_argument("exact_solution: k must be 1, 2, or 3");
  const double t1 = 1.0, x1 = 1.75;
  const double max_step = 1e-3;

  ExactSolution ex;
  ex.example = k;
  ex.ode_tol = ode_tol;

  if (k == 1) {
    auto rhs = [](double t, double s) {
      return 0.5 * (crossed_state(3.0, t, s) + uniform_state(1.0, t));
    };
    auto res = integrate_shock(rhs, 0.0, 0.0, t1, x1, ode_tol, max_step);
    ex.shocks.push_back(res.path);
    if (res.exited) ex.special_points.push_back(res.path.end_point());
    const ShockPath path = res.path;
    ex.value = [path](double t, double x) {
      if (x <= 0.0) return left_state(3.0, t);
      if (path.covers(t) && x >= path.eval(t)) return uniform_state(1.0, t);
      return crossed_state(3.0, t, x);
    };
    ex.singular_distance = [path](double t, double x) {
      double d = std::abs(x);
      if (path.covers(t)) d = std::min(d, std::abs(x - path.eval(t)));
      return d;
    };
  } else if (k == 2) {
    ex.value = [](double t, double x) {
      if (x <= 0.0) return left_state(1.0, t);
      const double xl = t + t * t, xr = 2.0 * t + t * t;
      if (x <= xl) return crossed_state(1.0, t, x);
      if (x < xr) return (x + t * t) / t;  // rarefaction fan from (0,0)
      return uniform_state(2.0, t);
    };
    ex.singular_distance = [](double t, double x) {
      const double xl = t + t * t, xr = 2.0 * t + t * t;
      return std::min({std::abs(x), std::abs(x - xl), std::abs(x - xr)});
    };
  } else {
    auto rhs_a = [](double t, double s) {
      return 0.5 * (crossed_state(3.0, t, s) + uniform_state(1.0, t));
    };
    auto rhs_b = [](double t, double s) {
      return 0.5 * (uniform_state(1.0, t) + uniform_state(0.5, t));
    };
    auto rhs_m = [](double t, double s) {
      return 0.5 * (crossed_state(3.0, t, s) + uniform_state(0.5, t));
    };
    auto res_a = integrate_shock(rhs_a, 0.0, 0.0, t1, x1, ode_tol, max_step);
    auto res_b = integrate_shock(rhs_b, 0.0, 0.5, t1, x1, ode_tol, max_step);
    ShockPath a = res_a.path, b = res_b.path;

    const double t_hi = std::min(a.t_end(), b.t_end());
    double tc = -1;
    if (a.eval(t_hi) - b.eval(t_hi) >= 0.0) {
      double lo = 0.0, hi = t_hi;
      for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (a.eval(mid) - b.eval(mid) >= 0.0 ? hi : lo) = mid;
      }
      tc = 0.5 * (lo + hi);
    }
    if (tc < 0) throw std::runtime_error("exact_solution: expected shock collision not found");

    truncate_path(a, tc, rhs_a);
    truncate_path(b, tc, rhs_b);
    const double sc = 0.5 * (a.s.back() + b.s.back());
    ex.collision = Vec2(tc, sc);
    ex.special_points.push_back(*ex.collision);

    auto res_m = integrate_shock(rhs_m, tc, sc, t1, x1, ode_tol, max_step);
    ShockPath m = res_m.path;
    if (res_m.exited) ex.special_points.push_back(m.end_point());

    ex.shocks = {a, b, m};
    const double t_star = tc;
    ex.value = [a, b, m, t_star](double t, double x) {
      if (x <= 0.0) return left_state(3.0, t);
      if (t < t_star) {
        if (x < a.eval(t)) return crossed_state(3.0, t, x);
        if (x < b.eval(t)) return uniform_state(1.0, t);
        return uniform_state(0.5, t);
      }
      if (m.covers(t) && x >= m.eval(t)) return uniform_state(0.5, t);
      return crossed_state(3.0, t, x);
    };
    ex.singular_distance = [a, b, m, t_star](double t, double x) {
      double d = std::abs(x);
      if (t < t_star) {
        d = std::min(d, std::abs(x - a.eval(t)));
        d = std::min(d, std::abs(x - b.eval(t)));
      } else if (m.covers(t)) {
        d = std::min(d, std::abs(x - m.eval(t)));
      }
      return d;
    };
  }
  return ex;
}

ExactSolution smooth_exact(std::function<double(double, double)> u) {
  ExactSolution ex;
  ex.example = 0;
  ex.value = std::move(u);
  ex.singular_distance = [](double, double) { return std::numeric_limits<double>::max(); };
  return ex;
}

double oracle_pde_residual_max(const ExactSolution& ex, const ProblemSpec& prob,
                               int nt_samples, int nx_samples, double exclusion,
                               double fd_step) {
  const auto [t0, t1, x0, x1] = prob.rect;
  const double d = fd_step;
  // fourth-order central differences: the fan solution of Example 2 has
  // derivatives growing like 1/t^4 toward the fan origin, which second-order
  // stencils cannot resolve at this step size
  auto d4 = [d](auto&& f) {
    return (-f(2.0 * d) + 8.0 * f(d) - 8.0 * f(-d) + f(-2.0 * d)) / (12.0 * d);
  };
  double worst = 0;
  for (int i = 1; i < nt_samples; ++i) {
    const double t = t0 + (t1 - t0) * i / nt_samples;
    if (t - 2 * d <= t0 || t + 2 * d >= t1) continue;
    for (int j = 1; j < nx_samples; ++j) {
      const double x = x0 + (x1 - x0) * j / nx_samples;
      if (x - 2 * d <= x0 || x + 2 * d >= x1) continue;
      if (ex.singular_distance(t, x) < exclusion) continue;
      const double u = ex.value(t, x);
      const double ut = d4([&](double s) { return ex.value(t + s, x); });
      const double ux = d4([&](double s) { return ex.value(t, x + s); });
      worst = std::max(worst, std::abs(ut + u * ux - prob.source(t, x)));
    }
  }
  return worst;
}

double oracle_rh_max(const ExactSolution& ex, double side_offset) {
  double worst = 0;
  for (const auto& p : ex.shocks) {
    for (size_t i = 0; i + 1 < p.t.size(); ++i) {
      const double tm = 0.5 * (p.t[i] + p.t[i + 1]);
      const double s = p.eval(tm);
      const double ul = ex.value(tm, s - side_offset);
      const double ur = ex.value(tm, s + side_offset);
      worst = std::max(worst, std::abs(p.eval_deriv(tm) - 0.5 * (ul + ur)));
    }
  }
  return worst;
}

double oracle_field_l1_diff(int k, double tol_a, double tol_b, int nt_samples,
                            int nx_samples) {
  const auto ex_a = exact_solution(k, tol_a);
  const auto ex_b = exact_solution(k, tol_b);
  const auto rect = example_spec(k).rect;
  const double area = (rect[1] - rect[0]) * (rect[3] - rect[2]);
  double sum = 0;
  for (int i = 0; i < nt_samples; ++i) {
    const double t = rect[0] + (rect[1] - rect[0]) * (i + 0.5) / nt_samples;
    for (int j = 0; j < nx_samples; ++j) {
      const double x = rect[2] + (rect[3] - rect[2]) * (j + 0.5) / nx_samples;
      sum += std::abs(ex_a.value(t, x) - ex_b.value(t, x));
    }
  }
  return sum * area / (static_cast<double>(nt_samples) * nx_samples);
}

}  // namespace hyperls
