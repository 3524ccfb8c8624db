#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "jetex/error.hpp"
#include "jetex/geom.hpp"

using namespace jetex;
using namespace jetex::geom;
using std::numbers::pi;

namespace {
Vec v2(double a, double b) { return Vec{{a, b}}; }
}  // namespace

TEST_CASE("model curvature") {
  auto s = RiemannianModel::constant_curvature(1);
  auto h = RiemannianModel::constant_curvature(-1);
  CHECK(s.sectional(v2(0.3, -0.2)) == 1);
  // the finite-difference curvature path agrees with the analytic profile formula
  auto rev = RiemannianModel::revolution(0.5);
  auto pf = RiemannianModel::perturbed_flat(0.2);
  for (auto x : {v2(0.1, 0.2), v2(-0.5, 0.3), v2(0.7, -0.6)}) {
    double K = rev.sectional(x);
    // conformal 2D curvature from the profile: K = -e^{-2F} Laplacian F, by finite differences of F
    auto F = [&](const Vec& y) { return rev.profile.f(y.squaredNorm()); };
    double hh = 1e-4, lap = 0;
    for (int j = 0; j < 2; ++j) {
      Vec p = x, m = x;
      p[j] += hh;
      m[j] -= hh;
      lap += (F(p) - 2 * F(x) + F(m)) / (hh * hh);
    }
    CHECK(K == doctest::Approx(-std::exp(-2 * F(x)) * lap).epsilon(1e-5));
    CHECK(std::isfinite(pf.sectional(x)));
  }
  // a flat perturbation amplitude of zero has zero curvature
  auto z = RiemannianModel::perturbed_flat(0.0);
  CHECK(std::abs(z.sectional(v2(0.2, 0.4))) < 1e-9);
  CHECK(h.chart_radius() == doctest::Approx(1));
  CHECK_THROWS_AS(RiemannianModel::parse("torus:1"), Error);
  CHECK(RiemannianModel::parse("sphere:2").kappa == 2);
  CHECK(RiemannianModel::parse("hyperbolic:1.0").kappa == -1);
  CHECK(RiemannianModel::parse("flat").kappa == 0);
  CHECK_THROWS_AS(RiemannianModel::parse("revolution:0.5", 3), Error);
}

TEST_CASE("perturbed curvature against the Brioschi formula") {
  auto pf = RiemannianModel::perturbed_flat(0.3);
  auto comp = [&](const Vec& x, int i, int j) { return pf.metric(x)(i, j); };
  const double h = 1e-3;
  auto d = [&](const Vec& x, int i, int j, int a) {
    Vec p = x, m = x;
    p[a] += h;
    m[a] -= h;
    return (comp(p, i, j) - comp(m, i, j)) / (2 * h);
  };
  auto dd = [&](const Vec& x, int i, int j, int a, int b) {
    Vec p = x, m = x;
    p[b] += h;
    m[b] -= h;
    return (d(p, i, j, a) - d(m, i, j, a)) / (2 * h);
  };
  for (auto x : {v2(0.1, 0.2), v2(-0.5, 0.3), v2(0.7, -0.6)}) {
    double E = comp(x, 0, 0), F = comp(x, 0, 1), G = comp(x, 1, 1);
    double Eu = d(x, 0, 0, 0), Ev = d(x, 0, 0, 1), Fu = d(x, 0, 1, 0), Fv = d(x, 0, 1, 1);
    double Gu = d(x, 1, 1, 0), Gv = d(x, 1, 1, 1);
    double Evv = dd(x, 0, 0, 1, 1), Guu = dd(x, 1, 1, 0, 0), Fuv = dd(x, 0, 1, 0, 1);
    Eigen::Matrix3d A, B;
    A << -Evv / 2 + Fuv - Guu / 2, Eu / 2, Fu - Ev / 2, Fv - Gu / 2, E, F, Gv / 2, F, G;
    B << 0, Ev / 2, Gu / 2, Ev / 2, E, F, Gu / 2, F, G;
    double K = (A.determinant() - B.determinant()) / std::pow(E * G - F * F, 2);
    CHECK(pf.sectional(x) == doctest::Approx(K).epsilon(1e-4));
  }
}

TEST_CASE("revolution gradient against finite differences") {
  auto rev = RiemannianModel::revolution(0.5);
  for (auto x : {v2(0.3, 0.1), v2(-0.4, 0.9)}) {
    double h = 1e-5;
    Vec d(2);
    for (int j = 0; j < 2; ++j) {
      Vec p = x, m = x;
      p[j] += h;
      m[j] -= h;
      d[j] = (rev.sectional(p) - rev.sectional(m)) / (2 * h);
    }
    double want = std::sqrt(d.dot(rev.metric(x).inverse() * d));
    CHECK(rev.curvature_gradient(x) == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("geodesics") {
  auto flat = RiemannianModel::constant_curvature(0);
  auto g = geodesic(flat, v2(0.1, 0.2), v2(0.6, 0.8), {0.0, 1.0, 2.0});
  CHECK((g[2].x - v2(1.3, 1.8)).norm() < 1e-12);

  // unit sphere in stereographic coordinates; the antipode of m is -m/|m|^2
  auto s = RiemannianModel::constant_curvature(1);
  Vec m = v2(0.5, 0.0);
  Vec u = orthonormal_frame(s, m) * v2(0.0, 1.0);
  auto sg = geodesic(s, m, u, {0.0, pi / 2, pi});
  CHECK((sg.back().x - v2(-2.0, 0.0)).norm() < 1e-8);
  for (auto& st : sg) {
    CHECK(std::sqrt(st.v.dot(s.metric(st.x) * st.v)) == doctest::Approx(1).epsilon(1e-10));
    Mat E = st.frame;
    CHECK((E.transpose() * s.metric(st.x) * E - Mat::Identity(2, 2)).norm() < 1e-9);
  }

  // Poincare disc: a radial geodesic from 0 reaches coordinate tanh(T/2)
  auto h = RiemannianModel::constant_curvature(-1);
  Vec uh = orthonormal_frame(h, Vec::Zero(2)) * v2(1.0, 0.0);
  auto hg = geodesic(h, Vec::Zero(2), uh, {2.0});
  CHECK(hg[0].x[0] == doctest::Approx(std::tanh(1.0)).epsilon(1e-10));
  CHECK_THROWS_AS(geodesic(h, Vec::Zero(2), v2(1.0, 0.0), {1.0}), Error);
}

TEST_CASE("jacobi fields") {
  auto flat = RiemannianModel::constant_curvature(0);
  auto j = jacobi_field(flat, v2(0.0, 0.0), v2(1.0, 0.0), v2(0.3, -0.4), {1.5});
  CHECK((j[0].y - 1.5 * v2(0.3, -0.4)).norm() < 1e-12);
  for (double kappa : {1.0, -1.0}) {
    auto M = RiemannianModel::constant_curvature(kappa);
    Vec m = v2(0.1, -0.05);
    Mat E = orthonormal_frame(M, m);
    auto jf = jacobi_field(M, m, E * v2(1.0, 0.0), v2(0.0, 1.0), {0.5, 1.0, 1.5});
    for (auto& st : jf) {
      double want = kappa > 0 ? std::sin(st.t) : std::sinh(st.t);
      CHECK(std::abs(st.y.norm() - want) < 1e-8);
    }
  }
  // a 3-dimensional sphere behaves the same in every normal direction
  auto s3 = RiemannianModel::constant_curvature(1, 3);
  auto j3 = jacobi_field(s3, Vec::Zero(3), orthonormal_frame(s3, Vec::Zero(3)) * Vec{{0.0, 0.0, 1.0}},
                         Vec{{0.6, 0.8, 0.0}}, {1.0});
  CHECK(std::abs(j3[0].y.norm() - std::sin(1.0)) < 1e-8);
}

TEST_CASE("exp differential singular values") {
  auto s = RiemannianModel::constant_curvature(1);
  auto h = RiemannianModel::constant_curvature(-1);
  CHECK((exp_differential(s, v2(0.2, 0.1), Vec::Zero(2)) - Mat::Identity(2, 2)).norm() == 0);
  Eigen::JacobiSVD<Mat> a(exp_differential(s, Vec::Zero(2), v2(0.6, 0.8)));
  CHECK(a.singularValues()[0] == doctest::Approx(1).epsilon(1e-9));
  CHECK(a.singularValues()[1] == doctest::Approx(std::sin(1.0)).epsilon(1e-9));
  Eigen::JacobiSVD<Mat> b(exp_differential(h, Vec::Zero(2), v2(0.0, 1.0)));
  CHECK(b.singularValues()[0] == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
  CHECK(b.singularValues()[1] == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("gronwall bounds") {
  for (double k : {0.1, 1.0, 10.0}) {
    double T = gronwall_horizon(k);
    CHECK(T <= pi / std::sqrt(k));
    auto up = gronwall_bounds_check([k](double) { return k; }, {}, k, 2.0, T);
    CHECK(std::abs(up.upper_gap) < 1e-8);
    auto dn = gronwall_bounds_check([k](double) { return -k; }, {}, k, 2.0, T);
    CHECK(std::abs(dn.lower_gap) < 1e-8);
    auto zero = gronwall_bounds_check([](double) { return 0.0; }, {}, k, 1.0, T);
    CHECK(zero.lower_margin >= 0);
    CHECK(zero.upper_margin >= 0);
    CHECK(zero.lower_gap > 0);
    CHECK(zero.upper_gap > 0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto q = random_q(k, T, seed);
      for (double t = 0; t < T; t += T / 97) CHECK(std::abs(q.at(t)) <= k * (1 + 1e-12));
      auto r = gronwall_bounds_check([&](double t) { return q.at(t); }, q.breaks, k, 1.0, T);
      CHECK(r.lower_margin >= -1e-6);
      CHECK(r.upper_margin >= -1e-6);
      CHECK_FALSE(r.v_negative);
    }
  }
  CHECK_THROWS_AS(gronwall_bounds_check([](double) { return 0.0; }, {}, 1.0, 1.0, 4.0), Error);
}

TEST_CASE("gronwall against a piecewise constant closed form") {
  // v'' = q v with q = k on [0, 1) and -k on [1, 2), v(0) = 0, v'(0) = 1
  double k = 0.5, sk = std::sqrt(k);
  auto q = [k](double t) { return t < 1 ? k : -k; };
  auto r = gronwall_bounds_check(q, {1.0}, k, 1.0, 2.0, 1);
  double v1 = std::sinh(sk) / sk, d1 = std::cosh(sk);
  double vT = v1 * std::cos(sk) + d1 * std::sin(sk) / sk;
  double hi = std::sinh(2 * sk) / sk, lo = std::sin(2 * sk) / sk;
  CHECK(r.upper_gap == doctest::Approx(hi - vT).epsilon(1e-10));
  CHECK(r.lower_gap == doctest::Approx(std::max(v1 - std::sin(sk) / sk, vT - lo)).epsilon(1e-10));
  CHECK(r.upper_margin == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("rauch deviation") {
  auto flat = RiemannianModel::constant_curvature(0);
  auto rf = rauch_deviation_check(flat, Vec::Zero(2), 1.0, 50, 1, 1.0);
  CHECK(rf.max_deviation < 1e-10);
  CHECK(rf.max_violation <= 0);
  auto s = RiemannianModel::constant_curvature(1);
  auto rs = rauch_deviation_check(s, Vec::Zero(2), 1.0, 200, 2);
  CHECK(rs.k_bound == 1);
  CHECK(rs.max_violation <= 1e-8);
  CHECK(rs.max_deviation <= 1 - std::sin(1.0) + 1e-8);
  CHECK(rs.radial_sv_error < 1e-8);
  auto h = RiemannianModel::constant_curvature(-1);
  auto rh = rauch_deviation_check(h, Vec::Zero(2), 1.0, 200, 3);
  CHECK(std::abs(rh.max_violation) < 1e-6);
  auto rev = RiemannianModel::revolution(0.5);
  auto rr = rauch_deviation_check(rev, Vec::Zero(2), 0.8, 100, 4);
  CHECK(rr.k_bound > 0);
  CHECK(rr.max_violation <= 1e-8);
  auto pf = RiemannianModel::perturbed_flat(0.2);
  auto rp = rauch_deviation_check(pf, v2(0.1, 0.1), 0.5, 40, 5);
  CHECK(rp.max_violation <= 1e-6);
}

TEST_CASE("curvature radius") {
  auto s = RiemannianModel::constant_curvature(1);
  CHECK(curvature_radius(s, Vec::Zero(2), 1).radius == doctest::Approx(0.1));
  auto s2 = RiemannianModel::constant_curvature(2);
  CHECK(curvature_radius(s2, Vec::Zero(2), 1).radius == doctest::Approx(0.1 / std::sqrt(2.0)));
  auto h = RiemannianModel::constant_curvature(-4);
  CHECK(curvature_radius(h, Vec::Zero(2), 2).radius == doctest::Approx(0.005));
  auto flat = curvature_radius(RiemannianModel::constant_curvature(0), Vec::Zero(2), 1, 0, 0.7);
  CHECK(flat.capped);
  CHECK(flat.radius == 0.7);
  auto rev = RiemannianModel::revolution(0.5);
  auto r0 = curvature_radius(rev, Vec::Zero(2), 1, 0);
  auto r1 = curvature_radius(rev, Vec::Zero(2), 1, 1);
  CHECK(r0.radius > 0);
  CHECK(r1.radius <= r0.radius);
  // at the radius the order-0 condition holds for the curvature at the centre
  CHECK(r0.radius * r0.radius * std::abs(rev.sectional(Vec::Zero(2))) <= 1e-2 * (1 + 1e-9));
}

TEST_CASE("admissible a") {
  auto a = admissible_a();
  CHECK(a.a == 1);
  CHECK(a.ratio == doctest::Approx(std::sinh(0.1) / 0.1));
  CHECK(a.ratio == doctest::Approx(1.00167).epsilon(1e-5));
  CHECK(a.zero_also_passes);
}

TEST_CASE("metric equivalence") {
  auto flat = metric_equivalence_check(RiemannianModel::constant_curvature(0), Vec::Zero(2), 0.5);
  CHECK(flat.lo == doctest::Approx(1));
  CHECK(flat.hi == doctest::Approx(1));
  auto s = metric_equivalence_check(RiemannianModel::constant_curvature(1), Vec::Zero(2), 0.1);
  CHECK(s.lo == doctest::Approx(std::pow(std::sin(0.1) / 0.1, 2)).epsilon(1e-9));
  auto h = metric_equivalence_check(RiemannianModel::constant_curvature(-1), Vec::Zero(2), 0.1);
  CHECK(h.hi == doctest::Approx(std::pow(std::sinh(0.1) / 0.1, 2)).epsilon(1e-9));
  auto s3 = metric_equivalence_check(RiemannianModel::constant_curvature(1, 3), Vec::Zero(3), 0.1);
  CHECK(s3.lo >= 0.5);
  CHECK(s3.hi <= 2);
}

TEST_CASE("inversion radius") {
  SmoothMap quad;
  quad.dim = 1;
  quad.f = [](const Vec& x) { return Vec{{x[0] + 0.5 * x[0] * x[0]}}; };
  quad.df = [](const Vec& x) { return Mat{{1 + x[0]}}; };
  quad.d2f = [](const Vec&) { return std::vector<Mat>{Mat{{1.0}}}; };
  auto r = inversion_radius(quad, Vec::Zero(1), 1.0);
  CHECK(r.rho == doctest::Approx(1.0 / 6));
  CHECK(r.injective);
  CHECK(r.min_ratio >= 5.0 / 6 - 1e-12);

  SmoothMap lin;
  lin.dim = 2;
  Mat L{{2.0, 1.0}, {0.0, 1.0}};
  lin.f = [L](const Vec& x) { return Vec(L * x); };
  lin.df = [L](const Vec&) { return L; };
  lin.d2f = [](const Vec&) { return std::vector<Mat>{Mat::Zero(2, 2), Mat::Zero(2, 2)}; };
  auto rl = inversion_radius(lin, Vec::Zero(2), 3.0);
  CHECK(rl.unbounded);
  CHECK(rl.rho == 3.0);
  CHECK(rl.injective);

  // scaling f by c and the domain by c leaves rho unchanged: g(x) = c f(x / c)
  double c = 4;
  SmoothMap sc;
  sc.dim = 1;
  sc.f = [&](const Vec& x) { return Vec(c * quad.f(x / c)); };
  sc.df = [&](const Vec& x) { return quad.df(x / c); };
  sc.d2f = [&](const Vec& x) { return std::vector<Mat>{quad.d2f(x / c)[0] / c}; };
  auto rs = inversion_radius(sc, Vec::Zero(1), 4.0);
  CHECK(rs.rho / c == doctest::Approx(r.rho));

  SmoothMap sing = quad;
  sing.df = [](const Vec&) { return Mat{{0.0}}; };
  CHECK_THROWS_AS(inversion_radius(sing, Vec::Zero(1), 1.0), Error);
}

TEST_CASE("poincare primitive") {
  auto vconst = [](const Vec&) { return Mat{{0.0, 1.0}, {-1.0, 0.0}}; };
  Vec x = v2(0.3, -0.7);
  Vec U = poincare_primitive(vconst, x);
  // U = (x1 dx2 - x2 dx1) / 2
  CHECK(U[0] == doctest::Approx(0.35));
  CHECK(U[1] == doctest::Approx(0.15));
  auto pc = poincare_check(vconst, 2, 1.0, 50, 1);
  CHECK(pc.dU_residual < 1e-10);
  auto zero = poincare_check([](const Vec&) { return Mat::Zero(2, 2); }, 2, 1.0, 10, 1);
  CHECK(zero.sup_U == 0);

  // random closed polynomial two-form v = d alpha in 3D
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  // alpha_b = sum over monomials x^e with |e| <= 3 of coef
  std::vector<std::array<int, 3>> exps;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c) exps.push_back({a, b, c});
  std::vector<std::vector<double>> coef(3, std::vector<double>(exps.size()));
  for (auto& cb : coef)
    for (auto& v : cb) v = n(rng);
  auto dmono = [&](const Vec& x, const std::array<int, 3>& e, int a) {
    if (e[a] == 0) return 0.0;
    double v = e[a];
    for (int i = 0; i < 3; ++i) v *= std::pow(x[i], e[i] - (i == a ? 1 : 0));
    return v;
  };
  auto form = [&](const Vec& x) {
    Mat V = Mat::Zero(3, 3);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (std::size_t m = 0; m < exps.size(); ++m) V(a, b) += coef[b][m] * dmono(x, exps[m], a) - coef[a][m] * dmono(x, exps[m], b);
    return V;
  };
  auto p3 = poincare_check(form, 3, 0.8, 40, 2);
  CHECK(p3.closedness < 1e-8);
  CHECK(p3.dU_residual < 1e-8);
  CHECK(p3.c1 <= 0.8);

  auto open = [](const Vec& x) {
    Mat V = Mat::Zero(3, 3);
    V(0, 1) = x[2];
    V(1, 0) = -x[2];
    return V;
  };
  CHECK_THROWS_AS(poincare_check(open, 3, 1.0, 5, 1), Error);
}

TEST_CASE("patch radius") {
  CHECK(patch_radius(2.0, 0.5) == doctest::Approx(1.0 / 24));
  CHECK(std::isinf(patch_radius(1.0, 0.0)));
}

TEST_CASE("suites") {
  auto t0 = std::chrono::steady_clock::now();
  auto rows = gronwall_suite(200, 3);
  CHECK(rows.size() == 12);
  for (auto& r : rows) {
    INFO(r.name << " " << r.measured);
    CHECK(r.pass);
  }
  for (const char* spec : {"sphere:1.0", "hyperbolic:1.0", "flat", "revolution:0.5"}) {
    auto rr = rauch_suite(RiemannianModel::parse(spec), 0.5, 100, 5);
    for (auto& r : rr) {
      INFO(r.name << " " << r.measured);
      CHECK(r.pass);
    }
  }
  auto csv = rows_csv(rows);
  CHECK(csv.rfind("name,measured,bound,tolerance,pass\n", 0) == 0);
  CHECK(csv == rows_csv(gronwall_suite(200, 3)));
  MESSAGE("suite seconds " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}
