#pragma once

#include "hyperls/linalg.hpp"
#include "hyperls/problems.hpp"
#include "hyperls/spaces.hpp"

#include <array>
#include <memory>
#include <vector>

namespace hyperls {

/// Right-hand-side functional l_d(phi) = (r, phi) - <f(g).n, phi> over the
/// dofs of the Gamma_C-constrained test space; constrained entries are zero
/// and the boundary pairing runs over Gamma_I edges only.
struct DataFunctional {
  FESpacePtr space;
  Vector values;

  double operator()(const FEField& p) const { return values.dot(p.coeffs); }
};

/// include_constrained_rows keeps the raw integrals in constrained rows
/// (used by tests to pair against a constant test extension).
DataFunctional assemble_ld(const FESpacePtr& space_C, const ProblemSpec& prob,
                           bool include_constrained_rows = false, int quad_degree = 0);

/// Quadrature degree making every functional term polynomial-exact for the
/// Burgers flux at the given space orders.
int default_quad_degree(int order_u, int order_v);

struct FhatBreakdown {
  double residual_sq = 0;   // || f(u) - grad q - perp psi ||^2
  double gradq_sq = 0;      // || grad q ||^2
  double ld_dot = 0;        // l_d(q)
  double boundary_sq = 0;   // || u - g ||^2 over Gamma_I (unweighted)
  double perp_psi_sq = 0;   // || perp psi ||^2

  double total(bool augment, double h, double eps) const {
    return residual_sq + gradq_sq + 2.0 * ld_dot + (augment ? h * boundary_sq : 0.0) +
           eps * eps * perp_psi_sq;
  }
};

FhatBreakdown eval_Fhat_parts(const FEField& u, const FEField& q, const FEField& psi,
                              const DataFunctional& ld, const ProblemSpec& prob,
                              int quad_degree = 0);

double eval_Fhat(const FEField& u, const FEField& q, const FEField& psi,
                 const DataFunctional& ld, const ProblemSpec& prob, double h, bool augment,
                 double eps, int quad_degree = 0);

/// Normal equations of one Gauss-Newton step over the free dofs of
/// U x V_{Gamma_C} x V_{Gamma_I}; block offsets give the three ranges.
struct GNSystem {
  CsrMatrix A;
  Vector b;
  std::array<int, 4> offsets{};
};

/// Per-level assembler: the sparsity pattern and the iterate-independent
/// blocks (the two stiffness blocks, their coupling, the boundary mass from
/// the augmentation, the regularization) are built once; assemble() refreshes
/// only the u-coupled blocks and the right-hand side.
class GNAssembler {
 public:
  GNAssembler(FESpacePtr space_u, FESpacePtr space_c, FESpacePtr space_i,
              const ProblemSpec& prob, DataFunctional ld, double h, bool augment,
              double eps, int quad_degree = 0);

  const GNSystem& assemble(const FEField& u, const FEField& q, const FEField& psi);

  const std::array<int, 4>& offsets() const { return system_.offsets; }
  int n_unknowns() const { return system_.offsets[3]; }

  /// x += step * delta scattered into the three coefficient vectors.
  void apply_update(FEField& u, FEField& q, FEField& psi, const Vector& delta,
                    double step) const;

 private:
  void build_pattern();
  void assemble_static();
  void add_at(int row, int col, double value);

  FESpacePtr su_, sc_, si_;
  ProblemSpec prob_;
  DataFunctional ld_;
  double h_;
  bool augment_;
  double eps_;

  QuadratureRule rule_;
  BasisTable tab_u_, tab_v_;
  // per triangle parity (all lower/upper triangles of the structured mesh are
  // congruent): physical gradients per quadrature point and the area weights
  struct ParityTables {
    std::vector<Eigen::MatrixXd> gu, gv;  // nq of (n_local x 2)
    Vector w;
  };
  std::array<ParityTables, 2> parity_;

  GNSystem system_;
  std::vector<double> static_values_;
  bool static_ready_ = false;
};

/// One-shot convenience wrapper around GNAssembler.
GNSystem assemble_gn(const FEField& u, const FEField& q, const FEField& psi,
                     const DataFunctional& ld, const ProblemSpec& prob, double h,
                     bool augment, double eps, int quad_degree = 0);

}  // namespace hyperls
