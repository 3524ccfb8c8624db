#pragma once

#include <Eigen/Dense>

namespace jetex::linalg {

struct ConstrainedSolution {
  Eigen::VectorXcd x;
  double objective = 0;  // x^H G x
  bool jittered = false;
};

/// Ratio of extreme eigenvalues of a Hermitian matrix (inf if not positive).
double condition_number(const Eigen::MatrixXcd& G);

/// Minimise x^H G x subject to C x = d through the KKT system: Cholesky of G
/// (retried with 1e-12 trace jitter), then the Schur complement C G^-1 C^H.
ConstrainedSolution kkt_minimize(const Eigen::MatrixXcd& G, const Eigen::MatrixXcd& C,
                                 const Eigen::VectorXcd& d);

/// Minimise sum_i w_i |(A x)_i|^2 subject to C x = d by a null-space
/// parametrisation and a QR least-squares solve on the weighted samples.
ConstrainedSolution lsq_minimize(const Eigen::MatrixXcd& A, const Eigen::VectorXd& w,
                                 const Eigen::MatrixXcd& C, const Eigen::VectorXcd& d);

/// Make a nearly Hermitian matrix exactly Hermitian by averaging with its adjoint.
Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& G);

}  // namespace jetex::linalg
