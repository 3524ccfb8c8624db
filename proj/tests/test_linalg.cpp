#include <random>

#include "doctest.h"
#include "jetex/error.hpp"
#include "jetex/linalg.hpp"

using namespace jetex;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

MatrixXcd random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  MatrixXcd M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = {n(rng), n(rng)};
  return M;
}

}  // namespace

TEST_CASE("property: KKT and null-space least squares agree") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 3 + trial % 7, p = 1 + trial % 3, m = 40;
    MatrixXcd A = random_matrix(m, n, rng);
    Eigen::VectorXd w = Eigen::VectorXd::Random(m).cwiseAbs().array() + 0.1;
    MatrixXcd G = A.adjoint() * w.asDiagonal() * A;
    MatrixXcd C = random_matrix(p, n, rng);
    VectorXcd d = random_matrix(p, 1, rng);
    auto a = linalg::kkt_minimize(G, C, d);
    auto b = linalg::lsq_minimize(A, w, C, d);
    CHECK((a.x - b.x).norm() < 1e-9 * (1 + b.x.norm()));
    CHECK(std::abs(a.objective - b.objective) < 1e-9 * (1 + b.objective));
    CHECK((C * a.x - d).norm() < 1e-10);
    // optimality against feasible competitors
    Eigen::FullPivLU<MatrixXcd> lu(C);
    MatrixXcd K = lu.kernel();
    for (int c = 0; c < K.cols(); ++c) {
      VectorXcd comp = a.x + K.col(c) * std::complex<double>(0.3, -0.2);
      double obj = (comp.adjoint() * G * comp)(0, 0).real();
      double pyth = a.objective + ((comp - a.x).adjoint() * G * (comp - a.x))(0, 0).real();
      CHECK(obj >= a.objective - 1e-10);
      CHECK(std::abs(obj - pyth) < 1e-9 * (1 + obj));
    }
  }
}

TEST_CASE("rank-deficient constraints are infeasible") {
  MatrixXcd G = MatrixXcd::Identity(3, 3);
  MatrixXcd C(2, 3);
  C << 1, 0, 0, 2, 0, 0;
  VectorXcd d(2);
  d << 1, 1;
  try {
    linalg::kkt_minimize(G, C, d);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Infeasible);
  }
}

TEST_CASE("condition number of a diagonal matrix") {
  MatrixXcd G = MatrixXcd::Zero(3, 3);
  G.diagonal() << 1.0, 10.0, 100.0;
  CHECK(linalg::condition_number(G) == doctest::Approx(100.0));
}
