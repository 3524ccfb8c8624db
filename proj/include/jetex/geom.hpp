#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jetex::geom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// f(rho), f', f'', f''' for a conformal factor g = e^{2 f(|x|^2)} delta.
struct RadialProfile {
  std::function<double(double)> f, f1, f2, f3;
  static RadialProfile constant_curvature(double kappa);
  /// f = alpha exp(-rho): a rotationally symmetric bump.
  static RadialProfile bump(double alpha);
};

enum class ModelKind { ConstantCurvature, Revolution, PerturbedFlat };

/// Riemannian metrics on a coordinate ball. Conformal kinds use a radial profile;
/// the perturbed flat model is g = delta + amp H(x) in dimension 2.
/// Curvature is R(X, Y)Z = K (<Y, Z> X - <X, Z> Y), exact in dimension 2 and
/// for constant curvature.
struct RiemannianModel {
  ModelKind kind = ModelKind::ConstantCurvature;
  int dim = 2;
  double kappa = 0;
  double amp = 0;
  RadialProfile profile;
  std::string name;

  static RiemannianModel constant_curvature(double kappa, int dim = 2);
  static RiemannianModel revolution(double alpha);
  static RiemannianModel perturbed_flat(double amp);
  /// "flat", "sphere:K", "hyperbolic:K" (curvature -K), "revolution:A", "perturbed:A".
  static RiemannianModel parse(const std::string& spec, int dim = 2);

  Mat metric(const Vec& x) const;
  /// gamma[k](i, j) = Christoffel symbol Gamma^k_ij.
  std::vector<Mat> christoffel(const Vec& x) const;
  double sectional(const Vec& x) const;
  /// |grad K|_g (order 1 covariant derivative norm of the curvature operator).
  double curvature_gradient(const Vec& x) const;
  /// Largest coordinate radius on which the chart is valid.
  double chart_radius() const;
};

/// Orthonormal frame at x (columns), g-orthonormal.
Mat orthonormal_frame(const RiemannianModel& M, const Vec& x);

struct GeodesicState {
  Vec x, v;
  Mat frame;  // parallel transported, columns
  double t = 0;
};

struct IntegratorTol {
  double abs = 1e-12, rel = 1e-12;
};

/// Trajectory of the geodesic with x(0) = m, x'(0) = u (coordinates, |u|_g = 1),
/// sampled at the given times (sorted, starting at or after 0).
std::vector<GeodesicState> geodesic(const RiemannianModel& M, const Vec& m, const Vec& u,
                                    const std::vector<double>& times, IntegratorTol tol = {});

struct JacobiState {
  double t = 0;
  Vec y, dy;  // components in the parallel frame
};
/// Jacobi field with Y(0) = 0, Y'(0) = v (v given in the frame at m).
std::vector<JacobiState> jacobi_field(const RiemannianModel& M, const Vec& m, const Vec& u, const Vec& v,
                                      const std::vector<double>& times, IntegratorTol tol = {});

/// T_x exp_m in orthonormal frames (x in frame coordinates at m).
Mat exp_differential(const RiemannianModel& M, const Vec& m, const Vec& x, IntegratorTol tol = {});

struct GronwallReport {
  double lower_margin = 0;  // min over samples of v - A sin(sqrt k t)/sqrt k
  double upper_margin = 0;  // min over samples of A sinh(sqrt k t)/sqrt k - v
  double lower_gap = 0;     // max over samples of the same differences
  double upper_gap = 0;
  bool v_negative = false;
  double horizon = 0;
};
/// Piecewise-smooth curvature sample: on [breaks[i], breaks[i+1]),
/// q = k (alpha + beta sin(omega t + phase)) with |alpha| + |beta| <= 1.
struct PiecewiseQ {
  double k = 0;
  std::vector<double> breaks;
  std::vector<std::array<double, 4>> pieces;
  double at(double t) const;
};
PiecewiseQ random_q(double k, double T, std::uint64_t seed);
double gronwall_horizon(double k);
GronwallReport gronwall_bounds_check(const std::function<double(double)>& q, const std::vector<double>& breaks,
                                     double k, double A, double T, int samples = 200);

struct RauchReport {
  double max_violation = -1e300;  // max over samples of deviation - bound
  double max_deviation = 0;
  double k_bound = 0;
  std::size_t samples = 0;
  double radial_sv_error = 0;     // Gauss lemma: |radial singular value - 1|
};
/// Deviation ||T_x exp_m - Id|| against sinh(sqrt k |x|)/(sqrt k |x|) - 1 at random x with |x| <= radius.
RauchReport rauch_deviation_check(const RiemannianModel& M, const Vec& m, double radius, std::size_t samples,
                                  std::uint64_t seed, double k_bound = -1);
/// sup |K| over the coordinate image of the geodesic ball of the given radius (sampled).
double curvature_bound(const RiemannianModel& M, const Vec& m, double radius);

struct CurvatureRadius {
  double radius = 0;
  bool capped = false;  // no curvature within the cap
  double norm_convention = 1;  // ||Theta|| = c |K|
};
CurvatureRadius curvature_radius(const RiemannianModel& M, const Vec& y0, int a, int max_order = 0,
                                 double cap = 1.0);

struct AdmissibleA {
  int a = 1;
  double ratio = 0;           // sinh(10^-a) / 10^-a
  bool zero_also_passes = false;
};
AdmissibleA admissible_a();

struct EigenRange {
  double lo = 0, hi = 0;
};
/// Eigenvalues of (T_v exp)^T (T_v exp) for v on a ball grid of radius r.
EigenRange metric_equivalence_check(const RiemannianModel& M, const Vec& y0, double r, int n_radial = 4,
                                    int n_dir = 12);

struct SmoothMap {
  int dim = 1;
  std::function<Vec(const Vec&)> f;
  std::function<Mat(const Vec&)> df;
  /// Hessians of each component.
  std::function<std::vector<Mat>(const Vec&)> d2f;
};
struct InversionRadius {
  double rho = 0;
  bool unbounded = false;     // second derivative vanishes on U
  double min_ratio = 0;       // min |f(x) - f(y)| / |x - y| over sampled pairs
  double certified_ratio = 0; // 1 / (2 ||df_a^-1||)
  bool injective = false;
};
/// Radius 1/(6 ||df_a^-1|| sup_U ||d^2 f||) with U = B(a, u_radius), sampled; injectivity certified
/// on B(a, rho) by random pairs.
InversionRadius inversion_radius(const SmoothMap& f, const Vec& a, double u_radius, std::size_t pairs = 10000,
                                 std::uint64_t seed = 1);

/// Two-form field on R^d as an antisymmetric matrix V(x).
using TwoForm = std::function<Mat(const Vec&)>;
struct PoincarePrimitive {
  double dU_residual = 0;   // max |dU - v| over samples
  double closedness = 0;    // max |dv| over samples
  double sup_U = 0, sup_v = 0;
  double c1 = 0;            // sup_U / sup_v
};
/// U_k(x) = sum_i (int_0^1 t V_ik(t x) dt) x_i.
Vec poincare_primitive(const TwoForm& v, const Vec& x, int nodes = 24);
PoincarePrimitive poincare_check(const TwoForm& v, int dim, double radius, std::size_t samples, std::uint64_t seed);

/// 1 / (24 ||Ds^-1|| sup ||D^2 s||), the chart radius about a point of Y.
double patch_radius(double ds_inverse_norm, double d2s_sup);

struct GeomRow {
  std::string name;
  double measured = 0;
  double bound = 0;
  double tolerance = 0;
  bool pass = false;
};
std::vector<GeomRow> gronwall_suite(std::size_t cases, std::uint64_t seed);
std::vector<GeomRow> rauch_suite(const RiemannianModel& M, double radius, std::size_t samples, std::uint64_t seed);
/// Admissible a, inversion radius and Poincare rows.
std::vector<GeomRow> auxiliary_suite(std::uint64_t seed);
std::vector<GeomRow> geom_suite(const RiemannianModel& M, double radius, std::uint64_t seed);
std::string rows_csv(const std::vector<GeomRow>& rows);

}  // namespace jetex::geom
