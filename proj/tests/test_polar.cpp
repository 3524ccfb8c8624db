#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "jetex/polar.hpp"

using namespace jetex;

namespace {

std::vector<cplx> sample(const PolarLayout& L, const std::function<cplx(cplx)>& f) {
  std::vector<cplx> s(L.size());
  for (std::size_t ir = 0; ir < L.n_radial(); ++ir)
    for (int it = 0; it < L.n_theta; ++it) s[ir * L.n_theta + it] = f(L.node(ir, it));
  return s;
}

double max_err(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("analyze and synthesize are inverse") {
  auto L = make_polar_layout(0.0, 0.0, 1.0, 8, 16);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<cplx> f(L.size());
  for (auto& x : f) x = {u(rng), u(rng)};
  auto back = polar::synthesize(L, polar::analyze(L, f));
  CHECK(max_err(f, back) < 1e-13);
}

TEST_CASE("wirtinger derivatives of polynomials") {
  auto L = make_polar_layout(0.0, 0.05, 1.0, 12, 24);
  auto zb = sample(L, [](cplx z) { return std::conj(z); });
  auto one = sample(L, [](cplx) { return cplx(1); });
  CHECK(max_err(polar::dbar(L, zb), one) < 1e-11);
  auto z3 = sample(L, [](cplx z) { return z * z * z; });
  CHECK(max_err(polar::dbar(L, z3), std::vector<cplx>(L.size(), 0.0)) < 1e-10);
  CHECK(max_err(polar::dz(L, z3), sample(L, [](cplx z) { return 3.0 * z * z; })) < 1e-10);
  auto n2 = sample(L, [](cplx z) { return std::norm(z); });
  CHECK(max_err(polar::laplacian(L, n2), std::vector<cplx>(L.size(), 4.0)) < 1e-9);
}

TEST_CASE("cauchy transform closed forms on the disc") {
  auto L = make_polar_layout(0.0, 0.0, 1.0, 16, 32);
  auto u = polar::cauchy_transform(L, sample(L, [](cplx) { return cplx(1); }));
  CHECK(max_err(u, sample(L, [](cplx z) { return std::conj(z); })) < 1e-12);
  auto u2 = polar::cauchy_transform(L, sample(L, [](cplx z) { return std::conj(z); }));
  CHECK(max_err(u2, sample(L, [](cplx z) { return std::conj(z) * std::conj(z) / 2.0; })) < 1e-12);
  auto u0 = polar::cauchy_transform(L, std::vector<cplx>(L.size(), 0.0));
  CHECK(max_err(u0, std::vector<cplx>(L.size(), 0.0)) == 0.0);
}

TEST_CASE("cauchy transform of the annulus indicator") {
  auto L = make_polar_layout({0.2, 0.1}, 0.01, 0.8, 16, 32);
  cplx c{0.2, 0.1};
  auto u = polar::cauchy_transform(L, std::vector<cplx>(L.size(), 1.0));
  auto want = sample(L, [&](cplx z) { return std::conj(z - c) - 1e-4 / (z - c); });
  CHECK(max_err(u, want) < 1e-10);
}

TEST_CASE("property: dbar of the transform returns the data") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    cplx a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    auto g = [&](cplx z) { return a + b * std::conj(z) * z + c * std::exp(z) * std::conj(z); };
    auto L = make_polar_layout(0.0, 0.01, 1.0, 32, 48);
    auto gs = sample(L, g);
    auto du = polar::dbar(L, polar::cauchy_transform(L, gs));
    CHECK(max_err(du, gs) < 1e-8);
  }
}

TEST_CASE("direct summation agrees with the spectral transform to first order") {
  auto L = make_polar_layout(0.0, 0.0, 1.0, 16, 32);
  auto gs = sample(L, [](cplx z) { return std::exp(std::conj(z)); });
  auto a = polar::cauchy_transform(L, gs);
  auto b = polar::cauchy_direct(L, gs);
  double e = 0;
  for (std::size_t ir = 0; ir < L.n_radial() - 2; ++ir)
    for (int it = 0; it < L.n_theta; ++it) e = std::max(e, std::abs(a[ir * L.n_theta + it] - b[ir * L.n_theta + it]));
  MESSAGE("direct vs spectral max deviation " << e);
  CHECK(e < 5e-2);
}

TEST_CASE("ring coefficients recover Taylor and Laurent terms") {
  auto L = make_polar_layout(0.0, 0.1, 1.0, 8, 32);
  auto f = sample(L, [](cplx z) { return 1.0 + 2.0 * z - 3.0 * z * z * z + 0.5 / z; });
  auto c = polar::ring_coefficients(L, f, 3, -2, 4);
  std::vector<cplx> want{0.0, 0.5, 1.0, 2.0, 0.0, -3.0, 0.0};
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(c[i] - want[i]) < 1e-12);
}

TEST_CASE("interpolation is spectrally accurate") {
  auto L = make_polar_layout(0.0, 0.0, 1.0, 16, 32);
  auto f = sample(L, [](cplx z) { return std::exp(z) * std::conj(z); });
  for (cplx z : {cplx(0.3, 0.2), cplx(-0.7, 0.1), cplx(0.0, -0.95)})
    CHECK(std::abs(polar::interpolate(L, f, z) - std::exp(z) * std::conj(z)) < 1e-10);
}
