#include "jetex/bump.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "jetex/error.hpp"
#include "jetex/polar.hpp"

namespace jetex::bump {

using std::numbers::pi;

namespace {

double smooth_step(double x) { return x * x * x * (10 + x * (-15 + 6 * x)); }
double smooth_step_d1(double x) { return 30 * x * x * (1 - x) * (1 - x); }
double smooth_step_d2(double x) { return 60 * x * (1 - x) * (1 - 2 * x); }

}  // namespace

double theta(double t) {
  if (t <= 0.5) return 1;
  if (t >= 1) return 0;
  return 1 - smooth_step(2 * t - 1);
}

double theta_d1(double t) {
  if (t <= 0.5 || t >= 1) return 0;
  return -2 * smooth_step_d1(2 * t - 1);
}

double theta_d2(double t) {
  if (t <= 0.5 || t >= 1) return 0;
  return -4 * smooth_step_d2(2 * t - 1);
}

double theta_d1_sup() { return std::abs(theta_d1(0.75)); }

Chi0 chi0(double t) {
  require(t <= 0, ErrorKind::Precondition, "chi0 is used on t <= 0 only");
  double u = 1 - t;
  return {t - std::log(u), 1 + 1 / u, 1 / (u * u)};
}

SigmaEtaLambda at_sigma(double sigma, double eps) {
  Chi0 c = chi0(sigma);
  return {sigma, eps - c.value, c.d1 * c.d1 / c.d2};
}

SigmaEtaLambda sigma_eta_lambda(double s_abs, double eps) {
  require(s_abs >= 0 && s_abs <= std::exp(-1.0) * (1 + 1e-12), ErrorKind::Precondition, "|s| must be <= 1/e");
  require(eps > 0, ErrorKind::Contract, "eps must be positive");
  return at_sigma(std::log(s_abs * s_abs + eps * eps), eps);
}

std::vector<double> default_sigma_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 380; ++i) g.push_back(-40 + 0.1 * i);
  return g;
}

ScalarSuite scalar_estimate_suite(double eps, std::span<const double> sigma_grid) {
  require(eps > 0 && eps <= 1e-2, ErrorKind::Precondition, "scalar suite needs eps <= 1e-2");
  std::vector<double> sg(sigma_grid.begin(), sigma_grid.end());
  std::sort(sg.begin(), sg.end());
  ScalarSuite out;
  double pe = -1, pl = -1, ps = -1;
  for (double s : sg) {
    require(s >= -40 - 1e-12 && s <= -2 + 1e-12, ErrorKind::Contract, "sigma grid must lie in [-40, -2]");
    auto v = at_sigma(s, eps);
    double re = v.eta / (s * s), rl = v.lambda / (s * s), rs = re + rl;
    out.c_eta = std::max(out.c_eta, re);
    out.c_lambda = std::max(out.c_lambda, rl);
    out.c_sum = std::max(out.c_sum, rs);
    // ascending sigma: ratios must grow toward -2
    if (pe >= 0 && (re < pe || rl < pl || rs < ps)) out.ratios_decrease = false;
    pe = re;
    pl = rl;
    ps = rs;
  }
  auto m2 = at_sigma(-2, eps);
  out.eta_ratio_at_minus2 = m2.eta / 4;
  out.lambda_ratio_at_minus2 = m2.lambda / 4;
  require(std::isfinite(out.c_sum), ErrorKind::Contract, "scalar constants not finite");
  return out;
}

double eta_threshold(double alpha) {
  // eta is smallest where sigma is largest, at |s| = 1/e
  const double s2 = std::exp(-2.0);
  auto eta_min = [&](double eps) { return eps - chi0(std::log(s2 + eps * eps)).value; };
  double lo = 1e-12, hi = std::sqrt(1 - s2);  // sigma = 0 at hi
  require(eta_min(lo) >= 2 * alpha, ErrorKind::Infeasible, "eta >= 2 alpha fails even as eps -> 0");
  if (eta_min(hi) >= 2 * alpha) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = (lo + hi) / 2;
    (eta_min(mid) >= 2 * alpha ? lo : hi) = mid;
  }
  return lo;
}

bool lagrange_inequality_check(std::span<const cplx> s, std::span<const cplx> a) {
  require(s.size() == a.size() && !s.empty(), ErrorKind::Contract, "vectors must have equal nonzero length");
  cplx ip = 0;
  double ns = 0, na = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ip += std::conj(s[i]) * a[i];
    ns += std::norm(s[i]);
    na += std::norm(a[i]);
  }
  require(ns > 0, ErrorKind::Precondition, "s must be nonzero");
  return std::norm(ip) <= na * ns * (1 + 1e-12);
}

LagrangeBatch lagrange_batch(std::size_t cases, int max_r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  LagrangeBatch b;
  for (std::size_t c = 0; c < cases; ++c) {
    int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_r));
    std::vector<cplx> s(r), a(r);
    for (auto& x : s) x = {n(rng), n(rng)};
    for (auto& x : a) x = {n(rng), n(rng)};
    // every few cases make a nearly parallel pair to probe the equality case
    if (c % 7 == 0) {
      cplx t{n(rng), n(rng)};
      for (int i = 0; i < r; ++i) a[i] = t * s[i] + 1e-9 * a[i];
    }
    ++b.cases;
    if (!lagrange_inequality_check(s, a)) ++b.failures;
    cplx ip = 0;
    double ns = 0, na = 0;
    for (int i = 0; i < r; ++i) {
      ip += std::conj(s[i]) * a[i];
      ns += std::norm(s[i]);
      na += std::norm(a[i]);
    }
    b.max_ratio = std::max(b.max_ratio, std::norm(ip) / (na * ns));
  }
  return b;
}

namespace {

struct SigmaDerivs {
  std::vector<double> abs_s2, sigma_zz, sigma_z2;  // |s|^2, sigma_{z zbar}, |sigma_z|^2
};

SigmaDerivs sigma_derivs(const PolarLayout& L, std::span<const cplx> s, double eps) {
  require(s.size() == L.size(), ErrorKind::Contract, "section not aligned with layout");
  require(eps > 0, ErrorKind::Contract, "eps must be positive");
  SigmaDerivs d;
  std::vector<cplx> sig(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double a = std::norm(s[i]);
    require(a > 0, ErrorKind::Precondition, "section vanishes on a grid node");
    d.abs_s2.push_back(a);
    sig[i] = std::log(a + eps * eps);
  }
  auto lap = polar::laplacian(L, sig);
  auto dz = polar::dz(L, sig);
  for (std::size_t i = 0; i < s.size(); ++i) {
    d.sigma_zz.push_back(lap[i].real() / 4);
    d.sigma_z2.push_back(std::norm(dz[i]));
  }
  return d;
}

}  // namespace

SlackReport ddbar_sigma_check(const PolarLayout& L, std::span<const cplx> s, double eps) {
  auto d = sigma_derivs(L, s, eps);
  SlackReport r;
  r.min_slack = INFINITY;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double lhs = d.sigma_zz[i];
    double rhs = eps * eps / d.abs_s2[i] * d.sigma_z2[i];
    r.min_slack = std::min(r.min_slack, lhs - rhs);
    r.scale = std::max(r.scale, std::abs(lhs));
  }
  return r;
}

SlackReport b_epsilon_chain_check(const PolarLayout& L, std::span<const cplx> s, std::span<const double> phi,
                                  double eps) {
  require(phi.size() == s.size(), ErrorKind::Contract, "phi not aligned with layout");
  auto d = sigma_derivs(L, s, eps);
  std::vector<cplx> ph(phi.begin(), phi.end());
  auto lap_phi = polar::laplacian(L, ph);
  SlackReport r;
  r.min_slack = INFINITY;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double sigma = std::log(d.abs_s2[i] + eps * eps);
    Chi0 c = chi0(sigma);
    double eta = eps - c.value;
    // eta_z = -chi0' sigma_z, eta_zz = -chi0'' |sigma_z|^2 - chi0' sigma_zz
    double eta_z2 = c.d1 * c.d1 * d.sigma_z2[i];
    double eta_zz = -c.d2 * d.sigma_z2[i] - c.d1 * d.sigma_zz[i];
    double lhs = eta * lap_phi[i].real() / 4 - eta_zz - c.d2 / (c.d1 * c.d1) * eta_z2;
    double rhs = eps * eps / (2 * d.abs_s2[i]) * eta_z2;
    r.min_slack = std::min(r.min_slack, lhs - rhs);
    r.scale = std::max(r.scale, std::abs(lhs));
  }
  return r;
}

CutoffProfile CutoffProfile::quintic() {
  CutoffProfile p;
  p.d1 = theta_d1;
  return p;
}

double c_rk_constant(int r, int k, const CutoffProfile& profile) {
  require(r >= 1 && k >= 0, ErrorKind::Contract, "need r >= 1, k >= 0");
  require(profile.d1(0.0) == 0.0 && profile.support_lo > 0, ErrorKind::Divergent,
          "theta' must vanish near 0 for the integral to converge");
  std::vector<double> x, w;
  gauss_legendre(40, x, w);
  double a = profile.support_lo, b = profile.support_hi, h = (b - a) / 2, m = (a + b) / 2, s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double t = m + h * x[i], d = profile.d1(t);
    s += h * w[i] * d * d * std::pow(t, -k - 1.0);
  }
  return std::pow(pi, r) / factorial(r - 1) * s;
}

MonteCarlo c_rk_monte_carlo(int r, int k, std::size_t samples, std::uint64_t seed, const CutoffProfile& profile) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  double sum = 0, sum2 = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double t = 0;
    for (int j = 0; j < 2 * r; ++j) {
      double v = u(rng);
      t += v * v;
    }
    double f = 0;
    if (t <= 1 && t > 0) {
      double d = profile.d1(t);
      f = d * d * std::pow(t, -(r + k));
    }
    sum += f;
    sum2 += f * f;
  }
  double n = static_cast<double>(samples), vol = std::pow(2.0, 2 * r);
  double mean = sum / n, var = std::max(0.0, sum2 / n - mean * mean);
  return {vol * mean, vol * std::sqrt(var / n)};
}

TaylorLimit taylor_limit_check(const std::vector<cplx>& h, int k, int levels) {
  require(k >= 0 && levels >= 3, ErrorKind::Contract, "need k >= 0 and at least 3 levels");
  for (int j = 0; j < k && j < static_cast<int>(h.size()); ++j)
    require(h[j] == cplx(0), ErrorKind::Precondition, "liftings do not agree to order k-1");
  cplx ck = k < static_cast<int>(h.size()) ? h[k] : cplx(0);
  auto unit = make_polar_layout(0.0, 0.0, 1.0, 12, 32);
  std::vector<cplx> pts;
  for (std::size_t ir = 0; ir < unit.n_radial(); ++ir)
    for (int it = 0; it < unit.n_theta; ++it) pts.push_back(unit.node(ir, it));
  for (int it = 0; it < unit.n_theta; ++it) pts.push_back(std::polar(1.0, 2 * pi * it / unit.n_theta));
  TaylorLimit out;
  std::vector<double> lx, ly;
  for (int j = 1; j <= levels; ++j) {
    double eps = std::ldexp(1.0, -j), dev = 0;
    for (cplx s : pts) {
      cplx v = 0;
      for (std::size_t m = h.size(); m-- > 0;) v = v * (eps * s) + h[m];
      double lhs = std::norm(v) / std::pow(eps, 2.0 * k);
      dev = std::max(dev, std::abs(lhs - std::norm(ck) * std::pow(std::abs(s), 2.0 * k)));
    }
    out.rows.push_back({eps, dev});
    if (dev > 0) {
      lx.push_back(std::log(eps));
      ly.push_back(std::log(dev));
    }
  }
  out.exact = std::all_of(out.rows.begin(), out.rows.end(), [](auto& r) { return r.deviation < 1e-13; });
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
    mx /= lx.size();
    my /= ly.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) sxx += (lx[i] - mx) * (lx[i] - mx), sxy += (lx[i] - mx) * (ly[i] - my);
    out.slope = sxy / sxx;
  }
  return out;
}

}  // namespace jetex::bump

namespace jetex::bump {

namespace {

std::vector<cplx> sample_section(const PolarLayout& L, const std::function<cplx(cplx)>& f) {
  std::vector<cplx> out(L.size());
  for (std::size_t ir = 0; ir < L.n_radial(); ++ir)
    for (int it = 0; it < L.n_theta; ++it) out[ir * L.n_theta + it] = f(L.node(ir, it));
  return out;
}

}  // namespace

std::vector<SuiteRow> bump_suite_rows(std::uint64_t seed, std::size_t mc_samples) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SuiteRow> rows;

  double d1_lo = INFINITY, d1_hi = 0;
  for (int i = 0; i <= 100000; ++i) {
    double t = -1e6 * std::pow(static_cast<double>(i) / 100000, 3);
    auto c = chi0(t);
    d1_lo = std::min(d1_lo, c.d1);
    d1_hi = std::max(d1_hi, c.d1);
  }
  rows.push_back({"chi0_d1_max", d1_hi, 2, d1_lo > 1 && d1_hi <= 2});

  const double eps = 1e-3;
  auto grid = default_sigma_grid();
  auto s = scalar_estimate_suite(eps, grid);
  std::vector<double> fine;
  for (int i = 0; i <= 760; ++i) fine.push_back(-40 + 0.05 * i);
  auto sf = scalar_estimate_suite(eps, fine);
  double drift = std::max({std::abs(s.c_eta - sf.c_eta), std::abs(s.c_lambda - sf.c_lambda), std::abs(s.c_sum - sf.c_sum)});
  rows.push_back({"eta_over_sigma2_sup", s.c_eta, 1, s.c_eta <= 1});
  // pass means the definitional lambda reproduces its closed form at sigma = -2, not the claimed 3
  rows.push_back({"lambda_over_sigma2_discrepancy", s.c_lambda, 3, std::abs(s.lambda_ratio_at_minus2 - 4) < 1e-12});
  double sum_closed = (eps + 2 + std::log(3.0)) / 4 + 4;
  rows.push_back({"sum_over_sigma2_discrepancy", s.c_sum, 4, std::abs(s.c_sum - sum_closed) < 1e-12});
  rows.push_back({"scalar_ratios_monotone", s.ratios_decrease ? 1.0 : 0.0, 1, s.ratios_decrease});
  rows.push_back({"scalar_grid_refinement_drift", drift, 0, drift < 1e-12});
  rows.push_back({"eta_threshold_eps", eta_threshold(1.0), nan, eta_threshold(1.0) > std::exp(-1.0)});

  auto lb = lagrange_batch(10000, 4, seed);
  rows.push_back({"lagrange_random_batch", lb.max_ratio, 1, lb.failures == 0});

  LayoutOptions opt;
  auto ann = make_polar_layout(0.0, 0.05, 1.0, 48, 32, opt);
  auto r1 = ddbar_sigma_check(ann, sample_section(ann, [](cplx z) { return z; }), 0.1);
  rows.push_back({"ddbar_sigma_slack_z", r1.min_slack, 0, r1.min_slack >= -1e-6});
  auto r2 = ddbar_sigma_check(ann, sample_section(ann, [](cplx z) { return z * z; }), 0.05);
  rows.push_back({"ddbar_sigma_slack_z2", r2.min_slack, 0, r2.min_slack >= -1e-6});
  auto r3 = ddbar_sigma_check(ann, sample_section(ann, [](cplx) { return cplx(0.3, 0.1); }), 0.1);
  rows.push_back({"ddbar_sigma_slack_const", r3.min_slack, 0, std::abs(r3.min_slack) <= 1e-6});

  const double se = 1 / (2 * std::exp(1.0));
  std::vector<double> phi(ann.size());
  for (std::size_t ir = 0; ir < ann.n_radial(); ++ir)
    for (int it = 0; it < ann.n_theta; ++it) phi[ir * ann.n_theta + it] = std::norm(ann.node(ir, it));
  auto bc = b_epsilon_chain_check(ann, sample_section(ann, [&](cplx z) { return se * z; }), phi, 1e-2);
  rows.push_back({"b_epsilon_chain_slack", bc.min_slack, 0, bc.min_slack >= -1e-6 * std::max(1.0, bc.scale)});

  rows.push_back({"theta_d1_sup", theta_d1_sup(), nan, std::abs(theta_d1_sup() - 3.75) < 1e-12});

  for (int r = 1; r <= 2; ++r)
    for (int k = 0; k <= 2; ++k) {
      double q = c_rk_constant(r, k);
      auto mc = c_rk_monte_carlo(r, k, mc_samples, seed + 100 * r + k);
      double z = std::abs(q - mc.mean) / mc.stderr_;
      rows.push_back({"c_rk_r" + std::to_string(r) + "_k" + std::to_string(k) + "_mc_sigmas", z, 3, z <= 3});
    }

  auto t1 = taylor_limit_check({0, 1, 1}, 1);
  rows.push_back({"taylor_limit_slope_k1", t1.slope, 1, t1.slope >= 0.9});
  auto t0 = taylor_limit_check({0, 0, 1}, 2);
  rows.push_back({"taylor_limit_homogeneous_k2", t0.rows.back().deviation, 0, t0.exact});
  return rows;
}

std::string suite_rows_csv(const std::vector<SuiteRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "name,measured_constant,paper_claim,pass\n";
  for (auto& r : rows) {
    os << r.name << ',' << r.measured_constant << ',';
    if (!std::isnan(r.paper_claim)) os << r.paper_claim;
    os << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

}  // namespace jetex::bump
