#pragma once

#include <string>
#include <vector>

#include "jetex/bergman.hpp"
#include "jetex/model.hpp"

namespace jetex::pipeline {

enum class Setup { A, B };

/// A: unit-scale disc of radius R, Y = {0}, jet a_0..a_k in z.
/// B: polydisc R x R2, Y = {z1 = 0}, jet_polys[m] = coefficients of a_m(z2).
/// The section is s = z1 / (e diam).
struct ExtensionProblem {
  Setup setup = Setup::A;
  double radius = 1.0;
  double radius2 = 1.0;
  int k = 0;
  std::vector<cplx> jet;
  std::vector<std::vector<cplx>> jet_polys;
  PhiFn phi;                 // empty means 0
  std::string phi_name = "zero";
  double excision = 1e-3;    // radius of the hole about Y, in z1 units
  int panel_nodes = 12;
  int n_theta = 48;
  int free_degree = 16;
  int y_radial = 4, y_theta = 8;  // Y grid for setup B

  double s_scale() const;
  double phi_at(cplx z1, cplx z2 = 0) const { return phi ? phi(z1, z2) : 0.0; }
  void validate() const;
};

/// Radius in z1 where |s| = t.
double radius_of_s(const ExtensionProblem& p, double t);

/// Planar grid used by the induction: excised disc with breaks at the cutoff kinks.
QuadGrid induction_grid(const ExtensionProblem& p, double eps);

struct SmoothExtension {
  std::vector<cplx> f;           // f~ at grid nodes
  std::vector<cplx> dbar_exact;  // D'' f~ by the product rule
  std::vector<cplx> dbar_grid;   // D'' f~ by spectral differentiation
  double decay_ratio = 0;        // max |D'' f~| / |s|^(k+1)
  double decay_bound = 0;        // sup|dbar theta_1| sup|h| / scale^(k+1)
};
/// One chart gives the holomorphic lift sum a_m z^m. Two charts split the disc
/// along Re z with a C^2 partition; the second lift adds s^(k+1) h.
SmoothExtension smooth_extension(const ExtensionProblem& p, const QuadGrid& grid, int charts,
                                 const std::vector<cplx>& h = {1.0});

/// theta(|s|^2/eps^2)(f - F_prev) at each node.
std::vector<cplx> truncate(std::span<const cplx> f, std::span<const cplx> F_prev, std::span<const double> s_abs,
                           double eps);

struct LevelRecord {
  int level = 0;
  double u_weighted_norm2 = 0;  // int |u|^2 |s|^-2(1+j) e^-phi
  double u_taylor = 0;          // max |Taylor coefficient of u| through order j
  double dbar_residual = 0;     // of the level solve
  double holomorphy = 0;        // max |dbar F_j| over the grid
  double weighted_norm2 = 0;    // of F_j, with the excision tail added
};

struct ExtensionResult {
  double eps = 0;
  std::vector<cplx> coeffs;                  // A: F_k = sum coeffs[m] z^m
  std::vector<std::vector<cplx>> fiber_coeffs;  // B: per Y node
  std::vector<LevelRecord> levels;
  double jet_residual = 0;     // max |extracted coefficient - a_j|, j <= k
  double weighted_norm2 = 0;   // int |F_k|^2 / (|s|^2 log^2|s|) e^-phi
  double jet_norm2 = 0;
  double ratio = 0;            // weighted_norm2 / jet_norm2
  double z2_holomorphy = 0;    // B only: misfit of coefficients to polynomials in z2
  std::vector<int> grid_resolution;
};

ExtensionResult run_induction(const ExtensionProblem& p, double eps);

/// Gram matrix of 1, z, ..., z^D for int f conj(g) / (|s|^2 log^2|s|) e^-phi(., z2) over the
/// disc of radius R, with the analytic contribution of the excised hole added to the (0, 0) entry.
Eigen::MatrixXcd weighted_gram(const ExtensionProblem& p, cplx z2 = 0);
/// Weighted norm of a polynomial F in z1 on the setup-A geometry, excision tail included.
double weighted_norm2(const ExtensionProblem& p, const std::vector<cplx>& coeffs);
double jet_norm2(const ExtensionProblem& p);

struct Schedule {
  std::vector<ExtensionResult> runs;
  double extrapolated_norm2 = 0;
  std::vector<cplx> extrapolated_coeffs;
  double last_change = 0;  // |N(eps_last) - N(eps_prev)|
  double envelope = 0;     // eps_prev + 1/log^2 eps_prev, times N
};
std::vector<double> default_eps_schedule();
/// Rejects eps whose cutoff annulus would not clear the excision.
Schedule run_schedule(const ExtensionProblem& p, const std::vector<double>& eps_list);

/// Minimal weighted-norm extension with the same jet (setup A), by the Bergman module.
Extension minimal_extension(const ExtensionProblem& p);

struct ConstantEstimate {
  std::vector<double> ratios;
  double sup = 0;
  double spread = 0;      // max / min over the batch
  double operator_sup = 0;  // largest generalized eigenvalue over basis jets
};
/// Random complex Gaussian jets (setup A), isotropic for the jet norm; zero jets excluded.
ConstantEstimate measure_constant(const ExtensionProblem& base, std::size_t n_jets, std::uint64_t seed, double eps);

std::string result_to_json(const ExtensionProblem& p, const ExtensionResult& r);

}  // namespace jetex::pipeline
