#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "jetex/bergman.hpp"
#include "jetex/model.hpp"

namespace jetex {

/// dbar u = g (coefficient of d conj(z1)) on a model grid with a weight.
struct DbarProblem {
  ModelDomain domain;
  std::vector<int> resolution;
  double excision = 0;
  LayoutOptions layout;
  QuadGrid grid;
  WeightField weight;
  std::vector<cplx> g;

  static DbarProblem make(const ModelDomain& domain, std::vector<int> resolution, double excision,
                          LayoutOptions layout = {});
  void validate() const;
};

/// Particular solution, fiber by fiber in z1 (mode-wise spectral transform).
std::vector<cplx> cauchy_transform(const DbarProblem& p);
/// Direct node-exclusion quadrature of the same transform (first-order oracle).
std::vector<cplx> cauchy_transform_direct(const DbarProblem& p);

/// max over nodes of |dbar u - g|, spectral differentiation per fiber.
double dbar_residual(const QuadGrid& grid, std::span<const cplx> u, std::span<const cplx> g);

struct DbarSolution {
  std::vector<cplx> u;
  double norm2 = 0;                   // int |u|^2 weight
  double orthogonality_residual = 0;  // max_a |<u, z^a>_w|
  double dbar_residual = 0;
};

/// u = u0 - P_w(u0) with P_w the weighted projection onto the basis span.
DbarSolution minimal_dbar_solution(const DbarProblem& p, const BasisSpec& basis);

/// Pointwise factor c = phi_{z conj z} of the scalar curvature operator.
struct CurvatureOperatorData {
  std::vector<double> c;
};

/// c = (Laplacian phi) / 4 by spectral differentiation.
CurvatureOperatorData curvature_from_phi(const QuadGrid& grid, std::span<const double> phi);

struct HormanderReport {
  double lhs = 0, rhs = 0, ratio = 0;
};

/// lhs = int |u|^2 e^-phi / (eta + lambda), rhs = 2 int |g|^2 e^-phi / (eta c), for
/// the minimal solution u in the weight e^-phi.
HormanderReport hormander_estimate_check(const DbarProblem& p, double eta, double lambda,
                                         const CurvatureOperatorData& curv, const BasisSpec& basis);

struct SingularSolve {
  std::vector<cplx> u;
  std::vector<cplx> taylor;    // coefficients of u at 0 through order k
  double max_taylor = 0;
  double weighted_norm2 = 0;   // int |u|^2 |z|^-2(1+k) e^-phi
  double plain_norm2 = 0;      // int |u|^2
  double dbar_residual = 0;
  double ring_radius = 0;
};

/// Solve with the weight |z1|^-2(1+k) e^-phi: u = u0 + h with h holomorphic,
/// chosen so u vanishes to order k at 0 and the weighted norm is minimal over
/// monomials up to free_degree. g must vanish near 0.
SingularSolve singular_weight_solve(const DbarProblem& p, int k, int free_degree = 16);

struct PunctureReport {
  double residual = 0;    // max |dbar u - g| on the innermost panels
  double mass_ratio = 0;  // L2 mass per log-radius, innermost panel over a reference panel
  bool extends = true;
};

PunctureReport puncture_extension_check(const QuadGrid& grid, std::span<const cplx> u, std::span<const cplx> g);

std::string problem_to_json(const DbarProblem& p);
DbarProblem problem_from_json(const std::string& text);
std::string solution_to_json(const DbarSolution& s);
DbarSolution solution_from_json(const std::string& text);

}  // namespace jetex
