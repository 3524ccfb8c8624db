#include "jetex/linalg.hpp"

#include <cmath>
#include <limits>

#include "jetex/error.hpp"

namespace jetex::linalg {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

Eigen::MatrixXcd hermitize(const MatrixXcd& G) { return (G + G.adjoint()) / 2.0; }

double condition_number(const MatrixXcd& G) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitize(G), Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

namespace {

void check_constraints(const MatrixXcd& C, const VectorXcd& d, Eigen::Index n) {
  require(C.cols() == n && C.rows() == d.size(), ErrorKind::Contract, "constraint shape mismatch");
  require(C.rows() <= n, ErrorKind::Infeasible, "more constraints than unknowns");
  if (C.rows() == 0) return;
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(C);
  qr.setThreshold(1e-12);
  require(qr.rank() == C.rows(), ErrorKind::Infeasible, "constraints are rank deficient");
}

}  // namespace

ConstrainedSolution kkt_minimize(const MatrixXcd& G0, const MatrixXcd& C, const VectorXcd& d) {
  require(G0.rows() == G0.cols(), ErrorKind::Contract, "Gram matrix must be square");
  check_constraints(C, d, G0.rows());
  MatrixXcd G = hermitize(G0);
  ConstrainedSolution out;
  Eigen::LLT<MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success) {
    double jitter = 1e-12 * G.trace().real();
    G += jitter * MatrixXcd::Identity(G.rows(), G.cols());
    llt.compute(G);
    require(llt.info() == Eigen::Success, ErrorKind::IllConditioned, "Gram matrix not positive definite");
    out.jittered = true;
  }
  if (C.rows() == 0) {
    out.x = VectorXcd::Zero(G.rows());
    return out;
  }
  MatrixXcd GiCh = llt.solve(C.adjoint());
  MatrixXcd S = hermitize(C * GiCh);
  Eigen::LDLT<MatrixXcd> sch(S);
  require(sch.info() == Eigen::Success, ErrorKind::Infeasible, "Schur complement singular");
  VectorXcd lam = sch.solve(d);
  out.x = GiCh * lam;
  out.objective = (out.x.adjoint() * G * out.x)(0, 0).real();
  return out;
}

ConstrainedSolution lsq_minimize(const MatrixXcd& A, const Eigen::VectorXd& w, const MatrixXcd& C,
                                 const VectorXcd& d) {
  require(A.rows() == w.size(), ErrorKind::Contract, "weights not aligned with sample rows");
  const Eigen::Index n = A.cols();
  check_constraints(C, d, n);
  MatrixXcd WA = w.cwiseSqrt().asDiagonal() * A;
  VectorXcd xp = VectorXcd::Zero(n);
  MatrixXcd Z = MatrixXcd::Identity(n, n);
  if (C.rows() > 0) {
    // C^H = Q R  =>  C = R^H Q1^H; particular solution Q1 R^-H d, null space Q2.
    Eigen::HouseholderQR<MatrixXcd> qr(C.adjoint());
    MatrixXcd Q = qr.householderQ() * MatrixXcd::Identity(n, n);
    const Eigen::Index p = C.rows();
    MatrixXcd R = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    VectorXcd y = R.adjoint().triangularView<Eigen::Lower>().solve(d);
    xp = Q.leftCols(p) * y;
    Z = Q.rightCols(n - p);
  }
  ConstrainedSolution out;
  if (Z.cols() > 0) {
    VectorXcd rhs = -(WA * xp);
    VectorXcd t = (WA * Z).colPivHouseholderQr().solve(rhs);
    out.x = xp + Z * t;
  } else {
    out.x = xp;
  }
  out.objective = (WA * out.x).squaredNorm();
  return out;
}

}  // namespace jetex::linalg
