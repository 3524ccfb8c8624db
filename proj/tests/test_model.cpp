#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "jetex/error.hpp"
#include "jetex/model.hpp"

using namespace jetex;
using std::numbers::pi;

namespace {

template <class F>
cplx quad(const QuadGrid& g, F f) {
  std::vector<cplx> s(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) s[i] = f(g.z1[i]);
  return integrate(g, std::span<const cplx>(s));
}

// Exact integral of z^a conj(z)^b over the annulus r0 < |z| < r1.
cplx monomial_integral(int a, int b, double r0, double r1) {
  if (a != b) return 0.0;
  int p = 2 * a + 2;
  return 2 * pi * (std::pow(r1, p) - std::pow(r0, p)) / p;
}

}  // namespace

TEST_CASE("unit disc area and simple moments") {
  auto g = make_grid(ModelDomain::disc(1.0), {32, 64}, 0.0);
  CHECK(std::abs(g.volume() - pi) < 1e-10);
  CHECK(std::abs(quad(g, [](cplx) { return cplx(1); }) - pi) < 1e-10);
  CHECK(std::abs(quad(g, [](cplx z) { return z; })) < 1e-10);
  CHECK(std::abs(quad(g, [](cplx z) { return std::norm(z); }) - pi / 2) < 1e-10);
  CHECK(std::abs(quad(g, [](cplx z) { return std::norm(z) * std::norm(z); }) - pi / 3) < 1e-9);
}

TEST_CASE("excised volumes of every domain kind") {
  for (double d : {0.0, 1e-3, 0.2}) {
    auto disc = make_grid(ModelDomain::disc(1.5), {16, 32}, d);
    CHECK(std::abs(disc.volume() / excised_volume(ModelDomain::disc(1.5), d) - 1) < 1e-10);
    auto ann = ModelDomain::annulus(0.1, 1.0);
    CHECK(std::abs(make_grid(ann, {16, 32}, d).volume() / excised_volume(ann, d) - 1) < 1e-10);
    auto pd = ModelDomain::polydisc(1.0, 0.5);
    CHECK(std::abs(make_grid(pd, {8, 8, 6, 8}, d).volume() / excised_volume(pd, d) - 1) < 1e-10);
    auto b = ModelDomain::ball2(1.0);
    CHECK(std::abs(make_grid(b, {8, 8, 8, 8}, d).volume() / excised_volume(b, d) - 1) < 1e-10);
  }
}

TEST_CASE("excision at or beyond the radius is an empty grid") {
  CHECK_THROWS_AS(make_grid(ModelDomain::disc(1.0), {8, 8}, 1.0), Error);
  try {
    make_grid(ModelDomain::disc(1.0), {8, 8}, 2.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyGrid);
  }
  CHECK_THROWS_AS(make_grid(ModelDomain::disc(1.0), {3, 8}, 0.0), Error);
}

TEST_CASE("integrate rejects misaligned samples") {
  auto g = make_grid(ModelDomain::disc(1.0), {4, 4}, 0.0);
  std::vector<double> s(g.size() + 1, 1.0);
  CHECK_THROWS_AS(integrate(g, std::span<const double>(s)), Error);
}

TEST_CASE("property: monomials up to degree resolution/2 integrate exactly") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    int nr = 8 + 2 * static_cast<int>(rng() % 8);
    int nt = 2 * nr;
    double d = (rng() % 2) ? 0.0 : 1e-3 * (1 + rng() % 100);
    auto g = make_grid(ModelDomain::disc(1.0), {nr, nt}, d);
    int deg = nr / 2;
    int a = static_cast<int>(rng() % (deg + 1));
    int b = static_cast<int>(rng() % (deg - a + 1));
    cplx got = quad(g, [&](cplx z) { return std::pow(z, a) * std::pow(std::conj(z), b); });
    cplx want = monomial_integral(a, b, d, 1.0);
    CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("property: refinement is Richardson-consistent for smooth integrands") {
  auto f = [](cplx z) { return std::exp(std::real(z)) * std::cos(std::imag(z) * 2.0); };
  std::vector<double> vals;
  for (int n : {4, 8, 16, 32}) vals.push_back(std::real(quad(make_grid(ModelDomain::disc(1.0), {n, 2 * n}, 0.0), f)));
  double exact = vals.back();
  for (std::size_t i = 1; i + 1 < vals.size(); ++i) {
    double prev_err = std::abs(vals[i] - vals[i - 1]);
    CHECK(std::abs(vals[i] - exact) <= prev_err + 1e-14);
  }
}

TEST_CASE("centered disc nodes stay inside") {
  auto dom = ModelDomain::disc(0.5, {0.3, -0.1});
  auto g = make_grid(dom, {8, 16}, 0.01);
  for (auto z : g.z1) {
    CHECK(std::abs(z - cplx(0.3, -0.1)) < 0.5);
    CHECK(std::abs(z - cplx(0.3, -0.1)) > 0.01);
  }
}

TEST_CASE("point grid is counting measure") {
  auto g = point_grid({0.2, 0.1});
  std::vector<cplx> s{cplx(3, 4)};
  CHECK(integrate(g, std::span<const cplx>(s)) == cplx(3, 4));
}

TEST_CASE("grid csv has one row per node") {
  auto g = make_grid(ModelDomain::polydisc(1, 1), {4, 4, 4, 4}, 0.1);
  std::ostringstream os;
  write_grid_csv(g, os);
  std::string s = os.str();
  CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(g.size() + 1));
  CHECK(s.rfind("re_z1,im_z1,re_z2,im_z2,weight", 0) == 0);
}

TEST_CASE("multi-indices") {
  auto a = multiindices_upto(1, 2);
  REQUIRE(a.size() == 3);
  CHECK(a[2].entries == std::vector<int>{2});
  auto b = multiindices_upto(2, 1);
  REQUIRE(b.size() == 3);
  CHECK(b[0].entries == std::vector<int>{0, 0});
  CHECK(b[1].entries == std::vector<int>{0, 1});
  CHECK(b[2].entries == std::vector<int>{1, 0});
  CHECK(multiindices_upto(2, 2).size() == 6);
  for (int r = 1; r <= 4; ++r)
    for (int k = 0; k <= 5; ++k) {
      auto m = multiindices_upto(r, k);
      CHECK(m.size() == static_cast<std::size_t>(binomial(r + k, r)));
      CHECK(std::is_sorted(m.begin(), m.end()));
      for (auto& x : m) CHECK(x.order() <= k);
    }
}
