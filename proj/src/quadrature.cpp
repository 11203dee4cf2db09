#include "hyperls/quadrature.hpp"

#include <cmath>
#include <vector>

namespace hyperls {

namespace {

struct Orbit {
  double a;  // representative barycentric coordinate
  double w;
  int kind;  // 0: centroid, 1: (a,b,b) with b=(1-a)/2, 2: all 6 perms of (a,b,c)
  double b = 0, c = 0;
};

QuadratureRule from_orbits(const std::vector<Orbit>& orbits, int degree) {
  std::vector<Eigen::Vector3d> pts;
  std::vector<double> w;
  for (const auto& o : orbits) {
    switch (o.kind) {
      case 0:
        pts.emplace_back(1.0 / 3, 1.0 / 3, 1.0 / 3);
        w.push_back(o.w);
        break;
      case 1: {
        const double b = 0.5 * (1.0 - o.a);
        pts.emplace_back(o.a, b, b);
        pts.emplace_back(b, o.a, b);
        pts.emplace_back(b, b, o.a);
        w.insert(w.end(), 3, o.w);
        break;
      }
      case 2: {
        const double a = o.a, b = o.b, c = o.c;
        const double perms[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                                    {b, c, a}, {c, a, b}, {c, b, a}};
        for (auto& p : perms) pts.emplace_back(p[0], p[1], p[2]);
        w.insert(w.end(), 6, o.w);
        break;
      }
    }
  }
  QuadratureRule rule;
  rule.degree = degree;
  rule.bary.resize(static_cast<int>(pts.size()), 3);
  rule.weights.resize(static_cast<int>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) {
    rule.bary.row(static_cast<int>(i)) = pts[i].transpose();
    rule.weights[static_cast<int>(i)] = 0.5 * w[i];  // scale to reference area
  }
  return rule;
}

}  // namespace

QuadratureRule quadrature_rule(int degree) {
  if (degree < 1) throw std::invalid_argument("quadrature_rule: degree must be >= 1");
  if (degree <= 1) return from_orbits({{0, 1.0, 0}}, 1);
  if (degree <= 2) return from_orbits({{2.0 / 3, 1.0 / 3, 1}}, 2);
  if (degree <= 4)  // the degree-3 rule with positive weights is this one
    return from_orbits({{0.108103018168070, 0.223381589678011, 1},
                        {0.816847572980459, 0.109951743655322, 1}},
                       4);
  if (degree <= 5)
    return from_orbits({{0, 0.225, 0},
                        {0.059715871789770, 0.132394152788506, 1},
                        {0.797426985353087, 0.125939180544827, 1}},
                       5);
  if (degree <= 6)
    return from_orbits({{0.501426509658179, 0.116786275726379, 1},
                        {0.873821971016996, 0.050844906370207, 1},
                        {0.053145049844816, 0.082851075618374, 2,
                         0.310352451033785, 0.636502499121399}},
                       6);
  if (degree <= 8)
    return from_orbits({{0, 0.14431560767778717, 0},
                        {0.081414823414553688, 0.095091634267284625, 1},
                        {0.65886138449647959, 0.10321737053471825, 1},
                        {0.89890554336593805, 0.032458497623198080, 1},
                        {0.0083947774099576053, 0.027230314174434994, 2,
                         0.26311282963463811, 0.72849239295540428}},
                       8);
  throw std::invalid_argument("quadrature_rule: no table beyond degree 8");
}

EdgeRule edge_rule(int degree) {
  if (degree < 1) throw std::invalid_argument("edge_rule: degree must be >= 1");
  if (degree > 9) throw std::invalid_argument("edge_rule: no table beyond degree 9");
  const int n = degree / 2 + 1;  // n points exact to 2n-1
  Eigen::VectorXd x(n), w(n);
  switch (n) {
    case 1:
      x << 0.0;
      w << 2.0;
      break;
    case 2:
      x << -0.577350269189625764509148780502, 0.577350269189625764509148780502;
      w << 1.0, 1.0;
      break;
    case 3:
      x << -0.774596669241483377035853079956, 0.0, 0.774596669241483377035853079956;
      w << 5.0 / 9, 8.0 / 9, 5.0 / 9;
      break;
    case 4:
      x << -0.861136311594052575223946488893, -0.339981043584856264802665759103,
          0.339981043584856264802665759103, 0.861136311594052575223946488893;
      w << 0.347854845137453857373063949222, 0.652145154862546142626936050778,
          0.652145154862546142626936050778, 0.347854845137453857373063949222;
      break;
    default:
      x << -0.906179845938663992797626878299, -0.538469310105683091036314420700, 0.0,
          0.538469310105683091036314420700, 0.906179845938663992797626878299;
      w << 0.236926885056189087514264040720, 0.478628670499366468041291514836,
          0.568888888888888888888888888889, 0.478628670499366468041291514836,
          0.236926885056189087514264040720;
      break;
  }
  EdgeRule rule;
  rule.degree = 2 * n - 1;
  rule.points = (x.array() + 1.0) * 0.5;
  rule.weights = w * 0.5;
  return rule;
}

}  // namespace hyperls
