#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "jetex/dbar.hpp"
#include "jetex/error.hpp"

using namespace jetex;
using std::numbers::pi;

namespace {

DbarProblem disc_problem(int nr, double excision = 0.0, LayoutOptions lo = {}) {
  return DbarProblem::make(ModelDomain::disc(1.0), {nr, 2 * nr}, excision, lo);
}

void fill(DbarProblem& p, auto g) {
  for (std::size_t i = 0; i < p.grid.size(); ++i) p.g[i] = g(p.grid.z1[i]);
}

double annular_bump(double r) {
  if (r <= 0.5 || r >= 1) return 0;
  double t = (r - 0.5) * (1 - r) * 16;
  return t * t * t;
}

DbarProblem bump_problem(double excision = 1e-3) {
  LayoutOptions lo;
  lo.extra_breaks = {0.5};
  auto p = disc_problem(24, excision, lo);
  fill(p, [](cplx z) { return annular_bump(std::abs(z)) * (1.0 + z * 0.5 + z * z * z + 0.3 * std::conj(z)); });
  return p;
}

}  // namespace

TEST_CASE("cauchy transform closed forms") {
  auto p = disc_problem(24);
  fill(p, [](cplx) { return cplx(1); });
  auto u = cauchy_transform(p);
  double e = 0;
  for (std::size_t i = 0; i < u.size(); ++i) e = std::max(e, std::abs(u[i] - std::conj(p.grid.z1[i])));
  CHECK(e < 1e-6);
  fill(p, [](cplx z) { return std::conj(z); });
  u = cauchy_transform(p);
  auto d = cauchy_transform_direct(p);
  double ed = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(p.grid.z1[i]) < 0.9) ed = std::max(ed, std::abs(d[i] - u[i]));
  MESSAGE("direct-summation oracle deviation " << ed);
  CHECK(ed < 5e-2);
  e = 0;
  for (std::size_t i = 0; i < u.size(); ++i)
    e = std::max(e, std::abs(u[i] - std::conj(p.grid.z1[i]) * std::conj(p.grid.z1[i]) / 2.0));
  CHECK(e < 1e-5);
  fill(p, [](cplx) { return cplx(0); });
  for (auto v : cauchy_transform(p)) CHECK(v == cplx(0));
}

TEST_CASE("minimal solutions with weight 1") {
  auto p = disc_problem(24);
  auto basis = BasisSpec::upto(1, 12);
  fill(p, [](cplx) { return cplx(1); });
  auto s = minimal_dbar_solution(p, basis);
  CHECK(s.norm2 == doctest::Approx(pi / 2).epsilon(1e-10));
  CHECK(s.orthogonality_residual < 1e-8);
  fill(p, [](cplx z) { return std::conj(z); });
  s = minimal_dbar_solution(p, basis);
  CHECK(std::abs(s.norm2 - pi / 12) < 1e-5);
  CHECK(s.orthogonality_residual < 1e-8);
  CHECK(s.dbar_residual < 1e-8);
  fill(p, [](cplx) { return cplx(0); });
  s = minimal_dbar_solution(p, basis);
  CHECK(s.norm2 == 0.0);
}

TEST_CASE("property: linearity and minimality of the solution operator") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n;
  auto basis = BasisSpec::upto(1, 10);
  for (int t = 0; t < 8; ++t) {
    auto p = disc_problem(20);
    p.weight.phi = sample_phi(p.grid, [&](cplx z, cplx) { return 0.5 * z.real() + std::norm(z); });
    cplx a{n(rng), n(rng)}, b{n(rng), n(rng)}, c{n(rng), n(rng)};
    auto g1 = [&](cplx z) { return a + b * std::conj(z) * z; };
    auto g2 = [&](cplx z) { return c * std::conj(z) * std::conj(z); };
    fill(p, g1);
    auto s1 = minimal_dbar_solution(p, basis);
    fill(p, g2);
    auto s2 = minimal_dbar_solution(p, basis);
    cplx lam{n(rng), n(rng)};
    fill(p, [&](cplx z) { return g1(z) + lam * g2(z); });
    auto s12 = minimal_dbar_solution(p, basis);
    double e = 0;
    for (std::size_t i = 0; i < s12.u.size(); ++i) e = std::max(e, std::abs(s12.u[i] - s1.u[i] - lam * s2.u[i]));
    CHECK(e < 1e-8);
    auto dens = p.weight.density(p.grid);
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(static_cast<long>(basis.size()));
    for (long j = 0; j < h.size(); ++j) h[j] = cplx(n(rng), n(rng)) * 0.1;
    auto hs = evaluate(p.grid, basis, h);
    std::vector<double> f(p.grid.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::norm(s12.u[i] + hs[i]) * dens[i];
    CHECK(integrate(p.grid, std::span<const double>(f)) >= s12.norm2 - 1e-12);
  }
}

TEST_CASE("hormander estimate in the scalar reduction") {
  auto basis = BasisSpec::upto(1, 12);
  auto p = disc_problem(24);
  p.weight.phi = sample_phi(p.grid, [](cplx z, cplx) { return std::norm(z); });
  auto curv = curvature_from_phi(p.grid, p.weight.phi);
  for (double c : curv.c) CHECK(c == doctest::Approx(1.0).epsilon(1e-9));
  fill(p, [](cplx) { return cplx(1); });
  auto rep = hormander_estimate_check(p, 1.0, 1.0, curv, basis);
  CHECK(rep.lhs == doctest::Approx(pi * (1 - 2 / std::exp(1.0)) / 2).epsilon(1e-8));
  CHECK(rep.ratio <= 1.0);
  fill(p, [](cplx) { return cplx(0); });
  auto zero = hormander_estimate_check(p, 1.0, 1.0, curv, basis);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  p.weight.phi = sample_phi(p.grid, [](cplx z, cplx) { return z.real(); });
  CHECK_THROWS_AS(hormander_estimate_check(p, 1.0, 1.0, curvature_from_phi(p.grid, p.weight.phi), basis), Error);
}

TEST_CASE("singular-weight solutions vanish to order k") {
  auto p = bump_problem();
  for (int k = 0; k <= 2; ++k) {
    auto s = singular_weight_solve(p, k);
    MESSAGE("k=" << k << " taylor " << s.max_taylor << " dbar residual " << s.dbar_residual);
    CHECK(s.max_taylor < 1e-6);
    CHECK(std::isfinite(s.weighted_norm2));
    CHECK(s.dbar_residual < 1e-4);
  }
  auto s0 = singular_weight_solve(p, 0), s1 = singular_weight_solve(p, 1);
  MESSAGE("plain norms k=0 " << s0.plain_norm2 << " k=1 " << s1.plain_norm2);
  CHECK(s1.plain_norm2 >= s0.plain_norm2 * (1 - 1e-12));
  auto z = disc_problem(16, 1e-3);
  auto sz = singular_weight_solve(z, 1);
  for (auto v : sz.u) CHECK(v == cplx(0));
  auto full = disc_problem(16, 1e-3);
  fill(full, [](cplx) { return cplx(1); });
  CHECK_THROWS_AS(singular_weight_solve(full, 1), Error);
}

TEST_CASE("puncture extension") {
  for (double d : {1e-2, 1e-3, 1e-4}) {
    auto p = disc_problem(24, d);
    fill(p, [](cplx) { return cplx(1); });
    std::vector<cplx> u(p.grid.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::conj(p.grid.z1[i]);
    auto rep = puncture_extension_check(p.grid, u, p.g);
    CHECK(rep.extends);
    CHECK(rep.residual < 1e-9);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += 1.0 / p.grid.z1[i];
    auto pole = puncture_extension_check(p.grid, u, p.g);
    CHECK_FALSE(pole.extends);
    CHECK(pole.mass_ratio > 0.5);
  }
  auto p = bump_problem();
  auto s = singular_weight_solve(p, 1);
  auto rep = puncture_extension_check(p.grid, s.u, p.g);
  CHECK(rep.extends);
  CHECK(rep.residual < 1e-6);
}

TEST_CASE("problem and solution JSON round trip") {
  auto p = bump_problem(1e-2);
  p.weight.phi = sample_phi(p.grid, [](cplx z, cplx) { return std::norm(z) / 3; });
  auto txt = problem_to_json(p);
  auto q = problem_from_json(txt);
  CHECK(q.g == p.g);
  CHECK(q.grid.z1 == p.grid.z1);
  CHECK(q.weight.phi == p.weight.phi);
  CHECK(problem_to_json(q) == txt);
  auto s = minimal_dbar_solution(p, BasisSpec::upto(1, 6));
  auto st = solution_to_json(s);
  CHECK(solution_to_json(solution_from_json(st)) == st);
  CHECK_THROWS_AS(problem_from_json("{}"), Error);
}
