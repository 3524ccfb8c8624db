#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jetex/model.hpp"

namespace jetex::bump {

/// Cutoff: 1 on (-inf, 1/2], 0 on [1, inf), reversed quintic smoothstep between.
double theta(double t);
double theta_d1(double t);
double theta_d2(double t);
/// sup |theta'|, attained at t = 3/4.
double theta_d1_sup();

struct Chi0 {
  double value, d1, d2;
};
/// chi0(t) = t - log(1 - t) for t <= 0.
Chi0 chi0(double t);

struct SigmaEtaLambda {
  double sigma, eta, lambda;
};
/// sigma = log(|s|^2 + eps^2), eta = eps - chi0(sigma), lambda = chi0'^2 / chi0''.
SigmaEtaLambda sigma_eta_lambda(double s_abs, double eps);
/// Same quantities as functions of sigma alone.
SigmaEtaLambda at_sigma(double sigma, double eps);

struct ScalarSuite {
  double c_eta = 0, c_lambda = 0, c_sum = 0;
  double eta_ratio_at_minus2 = 0, lambda_ratio_at_minus2 = 0;
  bool ratios_decrease = true;  // as sigma -> -inf
};

ScalarSuite scalar_estimate_suite(double eps, std::span<const double> sigma_grid);
std::vector<double> default_sigma_grid();

/// Largest eps with eta >= 2 alpha on |s| <= e^-1, found by bisection.
double eta_threshold(double alpha = 1.0);

/// |<a, s>|^2 <= |a|^2 |s|^2 with a relative 1e-12 slack.
bool lagrange_inequality_check(std::span<const cplx> s, std::span<const cplx> a);

struct LagrangeBatch {
  std::size_t cases = 0, failures = 0;
  double max_ratio = 0;  // |<a,s>|^2 / (|a|^2 |s|^2)
};
LagrangeBatch lagrange_batch(std::size_t cases, int max_r, std::uint64_t seed);

struct SlackReport {
  double min_slack = 0;  // min over nodes of lhs - rhs
  double scale = 0;      // max |lhs| over nodes
};

/// dz dzbar coefficients of i ddbar sigma and (eps^2/|s|^2) i dsigma ^ dbar sigma,
/// by spectral differentiation of sigma on the layout.
SlackReport ddbar_sigma_check(const PolarLayout& L, std::span<const cplx> s, double eps);

/// Scalar form of the bumped curvature inequality for trivial E and r = 1:
/// eta phi_zz + chi0' sigma_zz >= (eps^2 / 2|s|^2) |eta_z|^2 after cancelling the
/// eta_zz and (chi0''/chi0'^2)|eta_z|^2 terms; evaluated term by term.
SlackReport b_epsilon_chain_check(const PolarLayout& L, std::span<const cplx> s, std::span<const double> phi,
                                  double eps);

struct CutoffProfile {
  std::function<double(double)> d1;
  double support_lo = 0.5, support_hi = 1.0;
  static CutoffProfile quintic();
};

/// (pi^r / (r-1)!) int_{1/2}^{1} theta'(t)^2 t^(-k-1) dt: the integral of
/// theta'(|z|^2)^2 |z|^-2(r+k) against Lebesgue measure on the unit ball of C^r.
double c_rk_constant(int r, int k, const CutoffProfile& profile = CutoffProfile::quintic());

struct MonteCarlo {
  double mean = 0, stderr_ = 0;
};
MonteCarlo c_rk_monte_carlo(int r, int k, std::size_t samples, std::uint64_t seed,
                            const CutoffProfile& profile = CutoffProfile::quintic());

struct TaylorLimitRow {
  double eps, deviation;
};
struct TaylorLimit {
  std::vector<TaylorLimitRow> rows;
  double slope = 0;  // fitted d log deviation / d log eps
  bool exact = false;  // deviation identically 0 (homogeneous case)
};

/// h = f~ - F_{k-1} given by Taylor coefficients at 0 (must vanish below order k).
/// Deviation of |h(eps s)|^2 / eps^2k from |c_k|^2 |s|^2k, sup over |s| <= 1.
TaylorLimit taylor_limit_check(const std::vector<cplx>& h, int k, int levels = 8);

struct SuiteRow {
  std::string name;
  double measured_constant;
  double paper_claim;
  bool pass;
};
std::vector<SuiteRow> bump_suite_rows(std::uint64_t seed, std::size_t mc_samples = 2'000'000);
std::string suite_rows_csv(const std::vector<SuiteRow>& rows);

}  // namespace jetex::bump
