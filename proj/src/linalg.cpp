#include "hyperls/linalg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace hyperls {

void CholeskySolver::analyze(const CsrMatrix& A) {
  Eigen::SparseMatrix<double> Ac = A;  // column-major copy for the factorization
  ldlt_.analyzePattern(Ac);
  analyzed_ = true;
}

void CholeskySolver::factorize(const CsrMatrix& A) {
  Eigen::SparseMatrix<double> Ac = A;
  if (!analyzed_) {
    ldlt_.analyzePattern(Ac);
    analyzed_ = true;
  }
  ldlt_.factorize(Ac);
  if (ldlt_.info() != Eigen::Success)
    throw NotSpdError("cholesky: non-positive pivot (matrix not SPD)");
  if (ldlt_.vectorD().minCoeff() <= 0.0)
    throw NotSpdError("cholesky: non-positive pivot (matrix not SPD)");
}

Vector CholeskySolver::solve(const Vector& b) const { return ldlt_.solve(b); }

Vector cholesky_solve(const CsrMatrix& A, const Vector& b) {
  CholeskySolver solver;
  solver.factorize(A);
  return solver.solve(b);
}

Vector cg_solve(const CsrMatrix& A, const Vector& b, double tol, int maxit,
                const Vector* initial_guess) {
  const int n = static_cast<int>(A.rows());
  Vector inv_diag(n);
  for (int i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    if (d <= 0.0) throw NotSpdError("cg: non-positive diagonal entry");
    inv_diag[i] = 1.0 / d;
  }
  Vector x = initial_guess ? *initial_guess : Vector::Zero(n);
  Vector r = b - A * x;
  const double bnorm = b.norm();
  if (bnorm == 0.0) return Vector::Zero(n);
  Vector z = inv_diag.asDiagonal() * r;
  Vector p = z;
  double rz = r.dot(z);
  double rel = r.norm() / bnorm;
  for (int it = 0; it < maxit; ++it) {
    if (rel <= tol) return x;
    const Vector q = A * p;
    const double pq = p.dot(q);
    if (pq <= 0.0) throw NotSpdError("cg: indefinite direction encountered");
    const double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    rel = r.norm() / bnorm;
    z = inv_diag.asDiagonal() * r;
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (rel <= tol) return x;
  throw MaxIterError("cg: max iterations reached, relative residual " + std::to_string(rel),
                     rel);
}

double max_relative_asymmetry(const CsrMatrix& A) {
  const CsrMatrix At = CsrMatrix(A.transpose());
  double max_diff = 0, max_abs = 0;
  for (int k = 0; k < A.nonZeros(); ++k) {
    max_diff = std::max(max_diff, std::abs(A.valuePtr()[k] - At.valuePtr()[k]));
    max_abs = std::max(max_abs, std::abs(A.valuePtr()[k]));
  }
  return max_abs == 0 ? 0.0 : max_diff / max_abs;
}

void write_matrix_market(const std::string& path, const CsrMatrix& A) {
  std::ofstream out(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  char buf[64];
  for (int i = 0; i < A.outerSize(); ++i)
    for (CsrMatrix::InnerIterator it(A, i); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", static_cast<int>(it.row()) + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      out << buf;
    }
}

}  // namespace hyperls
