#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jetex/bump.hpp"
#include "jetex/error.hpp"
#include "jetex/model.hpp"

using namespace jetex;
using namespace jetex::bump;

TEST_CASE("theta profile") {
  CHECK(theta(0.2) == 1);
  CHECK(theta(0.5) == 1);
  CHECK(theta(1.0) == 0);
  CHECK(theta(0.75) == doctest::Approx(0.5));
  CHECK(theta_d1(0.5) == 0);
  CHECK(theta_d1(1.0) == 0);
  CHECK(theta_d1_sup() == doctest::Approx(3.75));
  for (double t = 0.51; t < 1; t += 0.01) {
    CHECK(theta(t + 0.005) <= theta(t));
    double fd = (theta(t + 1e-6) - theta(t - 1e-6)) / 2e-6;
    CHECK(theta_d1(t) == doctest::Approx(fd).epsilon(1e-6));
    double fd2 = (theta_d1(t + 1e-6) - theta_d1(t - 1e-6)) / 2e-6;
    CHECK(theta_d2(t) == doctest::Approx(fd2).epsilon(1e-5));
  }
}

TEST_CASE("chi0 values and range") {
  auto a = chi0(0);
  CHECK(a.value == 0);
  CHECK(a.d1 == 2);
  CHECK(a.d2 == 1);
  auto b = chi0(-2);
  CHECK(b.value == doctest::Approx(-2 - std::log(3.0)));
  CHECK(b.d1 == doctest::Approx(4.0 / 3));
  CHECK(b.d2 == doctest::Approx(1.0 / 9));
  CHECK_THROWS_AS(chi0(0.1), Error);
  for (double t = -1e6; t <= 0; t += 997.3) {
    auto c = chi0(t);
    CHECK(c.d1 > 1);
    CHECK(c.d1 <= 2);
  }
}

TEST_CASE("sigma eta lambda") {
  double eps = std::exp(-2.0);
  auto v = sigma_eta_lambda(0, eps);
  CHECK(v.sigma == doctest::Approx(-4));
  CHECK(v.eta == doctest::Approx(eps + 4 + std::log(5.0)));
  CHECK(v.lambda == doctest::Approx(36));
  CHECK_THROWS_AS(sigma_eta_lambda(0.5, 0.01), Error);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, std::exp(-1.0));
  for (int i = 0; i < 1000; ++i) {
    double e = 1e-4 + 0.01 * u(rng);
    auto w = sigma_eta_lambda(u(rng), e);
    CHECK(w.eta > 0);
    CHECK(w.eta >= e - w.sigma - 1e-12);
  }
}

TEST_CASE("scalar estimate suite") {
  auto g = default_sigma_grid();
  auto s = scalar_estimate_suite(1e-6, g);
  CHECK(s.eta_ratio_at_minus2 == doctest::Approx((2 + std::log(3.0)) / 4).epsilon(1e-5));
  CHECK(s.eta_ratio_at_minus2 == doctest::Approx(0.775).epsilon(1e-3));
  CHECK(s.lambda_ratio_at_minus2 == doctest::Approx(4));
  CHECK(s.c_lambda == doctest::Approx(4));
  CHECK(s.c_eta <= 1);
  CHECK(s.ratios_decrease);
  CHECK(std::isfinite(s.c_sum));
  CHECK_THROWS_AS(scalar_estimate_suite(0.1, g), Error);
}

TEST_CASE("eta threshold") {
  double e = eta_threshold(1.0);
  double s2 = std::exp(-2.0);
  CHECK(e - chi0(std::log(s2 + e * e)).value == doctest::Approx(2).epsilon(1e-9));
  CHECK(e > std::exp(-1.0));
}

TEST_CASE("lagrange inequality") {
  std::vector<cplx> s{{1, 2}, {0.5, -1}}, par{{-2, 1}, {1, 0.5}}, orth{{2, 0}, {-4, -8}};
  // par = i s
  for (std::size_t i = 0; i < 2; ++i) par[i] = cplx(0, 1) * s[i];
  CHECK(lagrange_inequality_check(s, par));
  cplx ip = std::conj(s[0]) * orth[0] + std::conj(s[1]) * orth[1];
  CHECK(std::abs(ip) > 0);
  // project out s to get an orthogonal vector
  double ns = std::norm(s[0]) + std::norm(s[1]);
  for (std::size_t i = 0; i < 2; ++i) orth[i] -= ip / ns * s[i];
  CHECK(std::abs(std::conj(s[0]) * orth[0] + std::conj(s[1]) * orth[1]) < 1e-12);
  CHECK(lagrange_inequality_check(s, orth));
  auto b = lagrange_batch(10000, 4, 11);
  CHECK(b.cases == 10000);
  CHECK(b.failures == 0);
  CHECK(b.max_ratio == doctest::Approx(1).epsilon(1e-9));
  std::vector<cplx> zero{0, 0};
  CHECK_THROWS_AS(lagrange_inequality_check(zero, s), Error);
}

namespace {
std::vector<cplx> sample(const PolarLayout& L, auto f) {
  std::vector<cplx> v(L.size());
  for (std::size_t ir = 0; ir < L.n_radial(); ++ir)
    for (int it = 0; it < L.n_theta; ++it) v[ir * L.n_theta + it] = f(L.node(ir, it));
  return v;
}
}  // namespace

TEST_CASE("ddbar sigma slack") {
  auto L = make_polar_layout(0.0, 0.05, 1.0, 48, 32, LayoutOptions{});
  auto a = ddbar_sigma_check(L, sample(L, [](cplx z) { return z; }), 0.1);
  CHECK(a.min_slack >= -1e-6);
  auto b = ddbar_sigma_check(L, sample(L, [](cplx z) { return z * z; }), 0.05);
  CHECK(b.min_slack >= -1e-6);
  auto c = ddbar_sigma_check(L, sample(L, [](cplx) { return cplx(2, 1); }), 0.1);
  CHECK(std::abs(c.min_slack) < 1e-8);
  CHECK(c.scale < 1e-8);
  // a non-holomorphic section can break the inequality
  auto d = ddbar_sigma_check(L, sample(L, [](cplx z) { return std::exp(-std::norm(z)); }), 0.1);
  CHECK(d.min_slack < -1e-3);
  auto full = make_polar_layout(0.0, 0.0, 1.0, 12, 16, LayoutOptions{});
  CHECK_THROWS_AS(ddbar_sigma_check(full, sample(full, [&](cplx z) { return z - full.node(0, 0); }), 0.1), Error);
}

TEST_CASE("b epsilon chain") {
  auto L = make_polar_layout(0.0, 0.05, 1.0, 48, 32, LayoutOptions{});
  double se = 1 / (2 * std::exp(1.0));
  std::vector<double> phi(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) phi[i] = 0;
  auto r = b_epsilon_chain_check(L, sample(L, [&](cplx z) { return se * z; }), phi, 1e-2);
  CHECK(r.min_slack >= -1e-6 * std::max(1.0, r.scale));
}

TEST_CASE("c_rk quadrature vs monte carlo") {
  for (int r = 1; r <= 2; ++r) {
    double prev = 0;
    for (int k = 0; k <= 2; ++k) {
      double q = c_rk_constant(r, k);
      CHECK(q > prev);
      prev = q;
      auto mc = c_rk_monte_carlo(r, k, 400000, 5 + r * 10 + k);
      CHECK(std::abs(q - mc.mean) <= 3 * mc.stderr_);
    }
  }
  // r = 1, k = 0 closed form: pi * int theta'^2 / t
  double x = c_rk_constant(1, 0);
  double s = 0;
  int n = 200000;
  for (int i = 0; i < n; ++i) {
    double t = 0.5 + (i + 0.5) * 0.5 / n;
    s += theta_d1(t) * theta_d1(t) / t;
  }
  CHECK(x == doctest::Approx(std::numbers::pi * s * 0.5 / n).epsilon(1e-8));
  CutoffProfile flat;
  flat.d1 = [](double) { return 0.0; };
  CHECK(c_rk_constant(2, 1, flat) == 0);
  CutoffProfile bad;
  bad.d1 = [](double) { return 1.0; };
  CHECK_THROWS_AS(c_rk_constant(1, 0, bad), Error);
}

TEST_CASE("taylor limit") {
  auto h = taylor_limit_check({0, 0, 1}, 2);
  CHECK(h.exact);
  auto r = taylor_limit_check({0, 1, 1}, 1);
  CHECK(r.slope == doctest::Approx(1).epsilon(0.1));
  CHECK(r.slope >= 0.9);
  auto z = taylor_limit_check({0, 0, 0, 2}, 2);
  CHECK(z.rows.back().deviation < z.rows.front().deviation);
  CHECK_THROWS_AS(taylor_limit_check({1, 1}, 1), Error);
}

TEST_CASE("suite rows csv") {
  auto rows = bump_suite_rows(7, 200000);
  for (auto& r : rows) {
    INFO(r.name << " " << r.measured_constant);
    CHECK(r.pass);
  }
  auto csv = suite_rows_csv(rows);
  CHECK(csv.rfind("name,measured_constant,paper_claim,pass\n", 0) == 0);
  CHECK(csv.find("lambda_over_sigma2_discrepancy") != std::string::npos);
  CHECK(csv == suite_rows_csv(bump_suite_rows(7, 200000)));
}
