#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <stdexcept>
#include <string>

namespace hyperls {

/// Row-major compressed storage: outerIndexPtr/innerIndexPtr/valuePtr are the
/// row offsets, sorted column indices, and values.
using CsrMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;

struct NotSpdError : std::runtime_error {
  explicit NotSpdError(const std::string& what) : std::runtime_error(what) {}
};

struct MaxIterError : std::runtime_error {
  MaxIterError(const std::string& what, double residual)
      : std::runtime_error(what), final_residual(residual) {}
  double final_residual;
};

/// Reusable sparse LDLT with fill-reducing (AMD) ordering; the symbolic
/// analysis is kept across refactorizations with the same pattern.
class CholeskySolver {
 public:
  void analyze(const CsrMatrix& A);
  void factorize(const CsrMatrix& A);  // throws NotSpdError on failure
  Vector solve(const Vector& b) const;
  bool analyzed() const { return analyzed_; }

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  bool analyzed_ = false;
};

Vector cholesky_solve(const CsrMatrix& A, const Vector& b);

/// Jacobi-preconditioned conjugate gradients; relative residual tolerance.
/// Throws MaxIterError (carrying the final relative residual) on stagnation.
Vector cg_solve(const CsrMatrix& A, const Vector& b, double tol, int maxit,
                const Vector* initial_guess = nullptr);

double max_relative_asymmetry(const CsrMatrix& A);

void write_matrix_market(const std::string& path, const CsrMatrix& A);

}  // namespace hyperls
