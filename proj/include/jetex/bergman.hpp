#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "jetex/jets.hpp"
#include "jetex/model.hpp"

namespace jetex {

/// Weight e^-phi |s|^-2m (-log|s|)^-2 (the last two optional), with the
/// section s = s_scale (z1 - center).
struct WeightField {
  std::vector<double> phi;  // per node; empty means phi = 0
  double singular_exponent = 0;
  bool log_factor = false;
  double s_scale = 1;
  cplx center{};

  /// Multiplier of the Lebesgue measure at every grid node.
  std::vector<double> density(const QuadGrid& grid) const;
};

using PhiFn = std::function<double(cplx z1, cplx z2)>;
std::vector<double> sample_phi(const QuadGrid& grid, const PhiFn& phi);

/// Monomials (z - origin)^alpha with |alpha| <= max_degree.
struct BasisSpec {
  int dim = 1;
  int max_degree = 0;
  std::array<cplx, 2> origin{};
  std::vector<MultiIndex> monomials;

  static BasisSpec upto(int dim, int max_degree, std::array<cplx, 2> origin = {});
  std::size_t size() const { return monomials.size(); }
  std::size_t index_of(const MultiIndex& a) const;
  cplx eval(std::size_t i, cplx z1, cplx z2 = 0) const;
  cplx eval_sum(const Eigen::VectorXcd& c, cplx z1, cplx z2 = 0) const;
};

/// Basis sampled at the grid nodes: rows are nodes, columns are monomials.
Eigen::MatrixXcd basis_samples(const QuadGrid& grid, const BasisSpec& basis);
std::vector<cplx> evaluate(const QuadGrid& grid, const BasisSpec& basis, const Eigen::VectorXcd& c);

struct GramData {
  Eigen::MatrixXcd G;
  double condition = 0;
};

/// G_ab = sum_i w_i density_i conj(z^a) z^b. Throws if cond(G) > 1e12.
GramData gram_matrix(const QuadGrid& grid, std::span<const double> density, const BasisSpec& basis);

/// Linear interpolation conditions C c = d on basis coefficients.
struct JetConstraints {
  Eigen::MatrixXcd C;
  Eigen::VectorXcd d;
};

/// Taylor coefficients at the point z0 (dim 1) prescribed by a point jet.
JetConstraints point_jet_constraints(const BasisSpec& basis, const JetData& jet, cplx z0);
/// Along Y = {z1 = 0}: coefficient of z1^m z2^b prescribed, coeff_polys[m][b].
JetConstraints hyperplane_jet_constraints(const BasisSpec& basis, int k,
                                          const std::vector<std::vector<cplx>>& coeff_polys);

struct Extension {
  Eigen::VectorXcd coeffs;
  double norm2 = 0;
  double condition = 0;
};

Extension minimal_jet_extension(const QuadGrid& grid, std::span<const double> density,
                                const BasisSpec& basis, const JetConstraints& cons);
/// Same problem by dense constrained least squares on the weighted samples.
Extension minimal_jet_extension_dense(const QuadGrid& grid, std::span<const double> density,
                                      const BasisSpec& basis, const JetConstraints& cons);

/// Weighted Bergman projection of samples onto the basis span; returns coefficients.
Eigen::VectorXcd bergman_projection(const QuadGrid& grid, std::span<const double> density,
                                    const BasisSpec& basis, std::span<const cplx> f);

struct CorollaryReport {
  double lhs = 0;          // int |F|^2 |z - z0|^-2(n - eps) e^-phi
  double rhs_frame = 0;    // (sum |a_alpha|^2) e^-phi(z0) / (eps^2 diam^2(n - eps))
  double ratio = 0;        // lhs / rhs_frame
  double c_star = 0;       // sup of the ratio over all nonzero jets
  int basis_degree = 0;
  std::vector<int> grid_resolution;
  Eigen::VectorXcd coeffs;
};

/// Point-singularity extension estimate (n = 1) on a disc centred at z0. Jet values are derivatives
/// f^(j)(z0), converted to Taylor coefficients internally.
CorollaryReport verify_corollary_bound(const ModelDomain& disc, const std::vector<cplx>& derivs,
                                       const PhiFn& phi, double eps, int resolution = 32,
                                       int basis_degree = 16);

struct ParsevalReport {
  double lhs = 0, rhs = 0, residual = 0;
};

/// int_{|z| < rho} |F|^2 against pi sum |c_m|^2 rho^(2m+2) / (m+1).
ParsevalReport parseval_check(const std::vector<cplx>& coeffs, double rho);

struct DerivativeControl {
  double gamma = 0;   // sum_{j<=k} |F^(j)(0) / j!|^2 divided by the weighted L2 norm
  double bound = 0;   // e^{sup phi} sum_{j<=k} (j+1) / (pi R^{2j+2})
  double norm2 = 0;
};

/// F sampled on an unexcised disc grid centred at 0; Y' = {0}.
DerivativeControl derivative_control(const QuadGrid& grid, std::span<const cplx> F,
                                     std::span<const double> phi, int k);

}  // namespace jetex
