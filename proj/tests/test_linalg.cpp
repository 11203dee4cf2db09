#include "hyperls/linalg.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace hyperls;

namespace {

CsrMatrix from_dense(const Eigen::MatrixXd& D) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < D.rows(); ++i)
    for (int j = 0; j < D.cols(); ++j)
      if (D(i, j) != 0.0) trips.emplace_back(i, j, D(i, j));
  CsrMatrix A(D.rows(), D.cols());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

CsrMatrix random_spd(int n, std::mt19937& rng) {
  std::normal_distribution<double> nrm;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i == j || nrm(rng) > 1.2) B(i, j) = nrm(rng);
  Eigen::MatrixXd D = B * B.transpose();
  D.diagonal().array() += 0.5;
  return from_dense(D);
}

}  // namespace

TEST_CASE("cholesky basic solves") {
  CsrMatrix I = from_dense(Eigen::MatrixXd::Identity(5, 5));
  Vector b(5);
  b << 3, -1, 0, 2, 7;
  CHECK((cholesky_solve(I, b) - b).norm() == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::MatrixXd D(2, 2);
  D << 4, 1, 1, 3;
  Vector b2(2);
  b2 << 1, 2;
  const Vector x = cholesky_solve(from_dense(D), b2);
  CHECK(x[0] == doctest::Approx(1.0 / 11).epsilon(1e-13));
  CHECK(x[1] == doctest::Approx(7.0 / 11).epsilon(1e-13));

  Eigen::MatrixXd neg(2, 2);
  neg << 1, 2, 2, 1;  // indefinite
  CHECK_THROWS_AS(cholesky_solve(from_dense(neg), b2), NotSpdError);
}

TEST_CASE("cg basic solves") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) D(i, i) = i + 1;
  const Vector x = cg_solve(from_dense(D), Vector::Ones(5), 1e-14, 100);
  for (int i = 0; i < 5; ++i) CHECK(x[i] == doctest::Approx(1.0 / (i + 1)).epsilon(1e-12));

  Eigen::MatrixXd M(2, 2);
  M << 4, 1, 1, 3;
  Vector b(2);
  b << 1, 2;
  const Vector y = cg_solve(from_dense(M), b, 1e-14, 100);
  CHECK(y[0] == doctest::Approx(1.0 / 11).epsilon(1e-12));
  CHECK(y[1] == doctest::Approx(7.0 / 11).epsilon(1e-12));

  CHECK_THROWS_AS(cg_solve(from_dense(M), b, 1e-16, 1), MaxIterError);
}

TEST_CASE("cholesky and cg agree on random SPD matrices") {
  std::mt19937 rng(17);
  for (int n : {20, 80, 300, 500}) {
    const CsrMatrix A = random_spd(n, rng);
    std::normal_distribution<double> nrm;
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = nrm(rng);
    const Vector xc = cholesky_solve(A, b);
    const Vector xg = cg_solve(A, b, 1e-12, 20 * n);
    CHECK((xc - xg).norm() <= 1e-8 * xc.norm());

    // residual contract
    const double anorm = Eigen::MatrixXd(A).cwiseAbs().rowwise().sum().maxCoeff();
    CHECK((A * xc - b).norm() <= 1e-10 * (anorm * xc.norm() + b.norm()));
  }
}

TEST_CASE("one factorization, several right-hand sides") {
  std::mt19937 rng(23);
  const CsrMatrix A = random_spd(120, rng);
  CholeskySolver chol;
  chol.factorize(A);
  const double anorm = Eigen::MatrixXd(A).cwiseAbs().rowwise().sum().maxCoeff();
  std::normal_distribution<double> nrm;
  for (int k = 0; k < 5; ++k) {
    Vector b(120);
    for (int i = 0; i < 120; ++i) b[i] = nrm(rng);
    const Vector x = chol.solve(b);
    CHECK((A * x - b).norm() <= 1e-10 * (anorm * x.norm() + b.norm()));
  }
}

TEST_CASE("symmetry measure") {
  Eigen::MatrixXd D(3, 3);
  D << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  CHECK(max_relative_asymmetry(from_dense(D)) == 0.0);
  D(0, 1) = 1 + 1e-6;
  CHECK(max_relative_asymmetry(from_dense(D)) > 1e-7);
}
