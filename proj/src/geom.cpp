#include "jetex/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "jetex/error.hpp"
#include "jetex/model.hpp"
#include "jetex/parallel.hpp"

namespace jetex::geom {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;
using std::numbers::pi;

RadialProfile RadialProfile::constant_curvature(double kappa) {
  RadialProfile p;
  // the flat member is the identity metric rather than 4 delta
  double base = kappa == 0 ? 0.0 : std::log(2.0);
  p.f = [kappa, base](double r) { return base - std::log1p(kappa * r); };
  p.f1 = [kappa](double r) { return -kappa / (1 + kappa * r); };
  p.f2 = [kappa](double r) { return kappa * kappa / ((1 + kappa * r) * (1 + kappa * r)); };
  p.f3 = [kappa](double r) { return -2 * std::pow(kappa, 3) / std::pow(1 + kappa * r, 3); };
  return p;
}

RadialProfile RadialProfile::bump(double alpha) {
  RadialProfile p;
  p.f = [alpha](double r) { return alpha * std::exp(-r); };
  p.f1 = [alpha](double r) { return -alpha * std::exp(-r); };
  p.f2 = [alpha](double r) { return alpha * std::exp(-r); };
  p.f3 = [alpha](double r) { return -alpha * std::exp(-r); };
  return p;
}

RiemannianModel RiemannianModel::constant_curvature(double kappa, int dim) {
  require(dim == 2 || dim == 3, ErrorKind::Contract, "dimension must be 2 or 3");
  RiemannianModel m;
  m.kind = ModelKind::ConstantCurvature;
  m.dim = dim;
  m.kappa = kappa;
  m.profile = RadialProfile::constant_curvature(kappa);
  std::ostringstream os;
  os << (kappa > 0 ? "sphere:" : kappa < 0 ? "hyperbolic:" : "flat") ;
  if (kappa != 0) os << std::abs(kappa);
  m.name = os.str();
  return m;
}

RiemannianModel RiemannianModel::revolution(double alpha) {
  RiemannianModel m;
  m.kind = ModelKind::Revolution;
  m.amp = alpha;
  m.profile = RadialProfile::bump(alpha);
  m.name = "revolution:" + std::to_string(alpha);
  return m;
}

RiemannianModel RiemannianModel::perturbed_flat(double amp) {
  require(std::abs(amp) < 0.5, ErrorKind::Contract, "perturbation amplitude must be below 1/2");
  RiemannianModel m;
  m.kind = ModelKind::PerturbedFlat;
  m.amp = amp;
  m.name = "perturbed:" + std::to_string(amp);
  return m;
}

RiemannianModel RiemannianModel::parse(const std::string& spec, int dim) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  double v = 0;
  if (colon != std::string::npos) {
    try {
      v = std::stod(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Schema, "bad model parameter in '" + spec + "'");
    }
  }
  if (kind == "flat") return constant_curvature(0, dim);
  if (kind == "sphere") return constant_curvature(colon == std::string::npos ? 1 : v, dim);
  if (kind == "hyperbolic") return constant_curvature(colon == std::string::npos ? -1 : -std::abs(v), dim);
  require(dim == 2, ErrorKind::UnsupportedGeometry, "only constant curvature models exist in dimension 3");
  if (kind == "revolution") return revolution(colon == std::string::npos ? 0.5 : v);
  if (kind == "perturbed") return perturbed_flat(colon == std::string::npos ? 0.1 : v);
  throw Error(ErrorKind::Schema, "unknown model '" + spec + "'");
}

namespace {

bool conformal(const RiemannianModel& M) { return M.kind != ModelKind::PerturbedFlat; }

// Perturbation H and its first partials dH[k] for the perturbed flat model.
Mat perturb(const Vec& x) {
  Mat H(2, 2);
  H(0, 0) = 0.5 * std::sin(x[0] + 0.3) * std::cos(x[1]);
  H(1, 1) = 0.5 * std::cos(2 * x[0] - x[1]);
  H(0, 1) = H(1, 0) = 0.25 * std::sin(x[0] * x[1]);
  return H;
}

std::array<Mat, 2> perturb_d(const Vec& x) {
  Mat a(2, 2), b(2, 2);
  a(0, 0) = 0.5 * std::cos(x[0] + 0.3) * std::cos(x[1]);
  b(0, 0) = -0.5 * std::sin(x[0] + 0.3) * std::sin(x[1]);
  a(1, 1) = -std::sin(2 * x[0] - x[1]);
  b(1, 1) = 0.5 * std::sin(2 * x[0] - x[1]);
  a(0, 1) = a(1, 0) = 0.25 * x[1] * std::cos(x[0] * x[1]);
  b(0, 1) = b(1, 0) = 0.25 * x[0] * std::cos(x[0] * x[1]);
  return {a, b};
}

// Gaussian curvature from Christoffel symbols by central differences (dimension 2).
double numeric_sectional(const RiemannianModel& M, const Vec& x) {
  const double h = 1e-5;
  std::array<std::vector<Mat>, 2> dG;
  for (int j = 0; j < 2; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    auto gp = M.christoffel(xp), gm = M.christoffel(xm);
    dG[j].resize(2);
    for (int l = 0; l < 2; ++l) dG[j][l] = (gp[l] - gm[l]) / (2 * h);
  }
  auto G = M.christoffel(x);
  // R^l_212 = d_1 Gamma^l_22 - d_2 Gamma^l_21 + Gamma^l_1m Gamma^m_22 - Gamma^l_2m Gamma^m_21
  Vec R(2);
  for (int l = 0; l < 2; ++l) {
    double v = dG[0][l](1, 1) - dG[1][l](1, 0);
    for (int m = 0; m < 2; ++m) v += G[l](0, m) * G[m](1, 1) - G[l](1, m) * G[m](1, 0);
    R[l] = v;
  }
  Mat g = M.metric(x);
  return (g.row(0).dot(R)) / g.determinant();
}

}  // namespace

Mat RiemannianModel::metric(const Vec& x) const {
  require(x.size() == dim, ErrorKind::Contract, "point has wrong dimension");
  if (conformal(*this)) {
    double e = std::exp(2 * profile.f(x.squaredNorm()));
    return e * Mat::Identity(dim, dim);
  }
  return Mat::Identity(2, 2) + amp * perturb(x);
}

std::vector<Mat> RiemannianModel::christoffel(const Vec& x) const {
  std::vector<Mat> G(dim, Mat::Zero(dim, dim));
  if (conformal(*this)) {
    Vec dF = 2 * profile.f1(x.squaredNorm()) * x;
    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          G[k](i, j) = (i == k ? dF[j] : 0) + (j == k ? dF[i] : 0) - (i == j ? dF[k] : 0);
    return G;
  }
  Mat ginv = metric(x).inverse();
  auto d = perturb_d(x);
  // Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij)
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0;
        for (int l = 0; l < 2; ++l) s += ginv(k, l) * amp * (d[i](l, j) + d[j](l, i) - d[l](i, j));
        G[k](i, j) = 0.5 * s;
      }
  return G;
}

double RiemannianModel::sectional(const Vec& x) const {
  if (kind == ModelKind::ConstantCurvature) return kappa;
  if (kind == ModelKind::PerturbedFlat) return numeric_sectional(*this, x);
  double r = x.squaredNorm(), f = profile.f(r);
  return -4 * std::exp(-2 * f) * (profile.f1(r) + r * profile.f2(r));
}

double RiemannianModel::curvature_gradient(const Vec& x) const {
  if (kind == ModelKind::ConstantCurvature) return 0;
  if (kind == ModelKind::Revolution) {
    double r = x.squaredNorm(), f = profile.f(r), f1 = profile.f1(r), f2 = profile.f2(r), f3 = profile.f3(r);
    double dK = -4 * std::exp(-2 * f) * (2 * f2 + r * f3 - 2 * f1 * (f1 + r * f2));
    return std::exp(-f) * 2 * std::sqrt(r) * std::abs(dK);
  }
  const double h = 1e-3;
  Vec d(2);
  for (int j = 0; j < 2; ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    d[j] = (sectional(xp) - sectional(xm)) / (2 * h);
  }
  return std::sqrt(d.dot(metric(x).inverse() * d));
}

double RiemannianModel::chart_radius() const {
  if (conformal(*this) && kind == ModelKind::ConstantCurvature && kappa < 0) return 1 / std::sqrt(-kappa);
  return std::numeric_limits<double>::infinity();
}

Mat orthonormal_frame(const RiemannianModel& M, const Vec& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(M.metric(x));
  require(es.eigenvalues().minCoeff() > 0, ErrorKind::Contract, "metric is not positive definite");
  return es.operatorInverseSqrt();
}

namespace {

// State: x, v, frame (column major), then nj Jacobi pairs (y, y') in frame components.
struct FlowSystem {
  const RiemannianModel& M;
  int nj = 0;

  void operator()(const State& s, State& ds, double) const {
    const int d = M.dim;
    Eigen::Map<const Vec> x(s.data(), d), v(s.data() + d, d);
    Eigen::Map<const Mat> E(s.data() + 2 * d, d, d);
    ds.resize(s.size());
    Eigen::Map<Vec> dx(ds.data(), d), dv(ds.data() + d, d);
    Eigen::Map<Mat> dE(ds.data() + 2 * d, d, d);
    Vec xv = x;
    auto G = M.christoffel(xv);
    dx = v;
    for (int k = 0; k < d; ++k) {
      dv[k] = -v.dot(G[k] * v);
      for (int b = 0; b < d; ++b) dE(k, b) = -v.dot(G[k] * E.col(b));
    }
    if (nj == 0) return;
    // R(E_b, gamma')gamma' = K (|gamma'|^2 E_b - <E_b, gamma'> gamma')
    Vec w = E.transpose() * M.metric(xv) * v;
    double K = M.sectional(xv);
    Mat R = K * (w.squaredNorm() * Mat::Identity(d, d) - w * w.transpose());
    const std::size_t base = 2 * d + d * d;
    for (int j = 0; j < nj; ++j) {
      Eigen::Map<const Vec> y(s.data() + base + 2 * d * j, d), dy(s.data() + base + 2 * d * j + d, d);
      Eigen::Map<Vec> oy(ds.data() + base + 2 * d * j, d), ody(ds.data() + base + 2 * d * j + d, d);
      oy = dy;
      ody = -R * y;
    }
  }
};

State initial_state(const RiemannianModel& M, const Vec& m, const Vec& u, const std::vector<Vec>& jac_dy) {
  const int d = M.dim;
  require(m.size() == d && u.size() == d, ErrorKind::Contract, "dimension mismatch");
  State s(2 * d + d * d + 2 * d * jac_dy.size(), 0.0);
  Eigen::Map<Vec>(s.data(), d) = m;
  Eigen::Map<Vec>(s.data() + d, d) = u;
  Eigen::Map<Mat>(s.data() + 2 * d, d, d) = orthonormal_frame(M, m);
  const std::size_t base = 2 * d + d * d;
  for (std::size_t j = 0; j < jac_dy.size(); ++j) Eigen::Map<Vec>(s.data() + base + 2 * d * j + d, d) = jac_dy[j];
  return s;
}

template <class Obs>
void flow(const RiemannianModel& M, State s, int nj, const std::vector<double>& times, IntegratorTol tol, Obs obs) {
  require(!times.empty() && times.front() >= 0 && std::is_sorted(times.begin(), times.end()), ErrorKind::Contract,
          "times must be sorted and nonnegative");
  std::vector<double> ts{0.0};
  for (double t : times)
    if (t > ts.back()) ts.push_back(t);
  FlowSystem sys{M, nj};
  auto stepper = odeint::make_dense_output(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
  std::vector<State> at;
  at.reserve(ts.size());
  odeint::integrate_times(stepper, sys, s, ts.begin(), ts.end(), 1e-3,
                          [&](const State& st, double) { at.push_back(st); });
  // map requested times (including repeats and t = 0) onto integrated samples
  std::size_t k = 0;
  for (double t : times) {
    while (k + 1 < ts.size() && ts[k] < t) ++k;
    for (double v : at[k]) require(std::isfinite(v), ErrorKind::Divergent, "geodesic left the chart");
    obs(at[k], t);
  }
}

}  // namespace

std::vector<GeodesicState> geodesic(const RiemannianModel& M, const Vec& m, const Vec& u,
                                    const std::vector<double>& times, IntegratorTol tol) {
  double speed = std::sqrt(u.dot(M.metric(m) * u));
  require(std::abs(speed - 1) < 1e-9, ErrorKind::Contract, "initial velocity must have unit length");
  std::vector<GeodesicState> out;
  const int d = M.dim;
  flow(M, initial_state(M, m, u, {}), 0, times, tol, [&](const State& s, double t) {
    GeodesicState g;
    g.t = t;
    g.x = Eigen::Map<const Vec>(s.data(), d);
    g.v = Eigen::Map<const Vec>(s.data() + d, d);
    g.frame = Eigen::Map<const Mat>(s.data() + 2 * d, d, d);
    out.push_back(g);
  });
  return out;
}

std::vector<JacobiState> jacobi_field(const RiemannianModel& M, const Vec& m, const Vec& u, const Vec& v,
                                      const std::vector<double>& times, IntegratorTol tol) {
  double speed = std::sqrt(u.dot(M.metric(m) * u));
  require(std::abs(speed - 1) < 1e-9, ErrorKind::Contract, "initial velocity must have unit length");
  const int d = M.dim;
  std::vector<JacobiState> out;
  flow(M, initial_state(M, m, u, {v}), 1, times, tol, [&](const State& s, double t) {
    const std::size_t base = 2 * d + d * d;
    out.push_back({t, Eigen::Map<const Vec>(s.data() + base, d), Eigen::Map<const Vec>(s.data() + base + d, d)});
  });
  return out;
}

Mat exp_differential(const RiemannianModel& M, const Vec& m, const Vec& x, IntegratorTol tol) {
  const int d = M.dim;
  double T = x.norm();
  if (T == 0) return Mat::Identity(d, d);
  Vec u = orthonormal_frame(M, m) * (x / T);
  std::vector<Vec> dys;
  for (int b = 0; b < d; ++b) dys.push_back(Vec::Unit(d, b));
  Mat A(d, d);
  flow(M, initial_state(M, m, u, dys), d, {T}, tol, [&](const State& s, double) {
    const std::size_t base = 2 * d + d * d;
    for (int b = 0; b < d; ++b) A.col(b) = Eigen::Map<const Vec>(s.data() + base + 2 * d * b, d) / T;
  });
  return A;
}

double PiecewiseQ::at(double t) const {
  std::size_t i = 0;
  while (i + 1 < pieces.size() && t >= breaks[i + 1]) ++i;
  const auto& p = pieces[i];
  return k * (p[0] + p[1] * std::sin(p[2] * t + p[3]));
}

PiecewiseQ random_q(double k, double T, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  PiecewiseQ q;
  q.k = k;
  int n = 1 + static_cast<int>(rng() % 6);
  q.breaks.push_back(0);
  std::vector<double> cuts;
  for (int i = 1; i < n; ++i) cuts.push_back(T * u(rng));
  std::sort(cuts.begin(), cuts.end());
  q.breaks.insert(q.breaks.end(), cuts.begin(), cuts.end());
  q.breaks.push_back(T);
  for (int i = 0; i < n; ++i) {
    double total = u(rng), split = u(rng);
    double alpha = (2 * u(rng) > 1 ? 1 : -1) * total * split;
    double beta = total * (1 - split);
    q.pieces.push_back({alpha, beta, 10 * u(rng), 2 * pi * u(rng)});
  }
  return q;
}

double gronwall_horizon(double k) {
  require(k > 0, ErrorKind::Contract, "k must be positive");
  return std::min(3.0, 0.9 * pi / std::sqrt(k));
}

GronwallReport gronwall_bounds_check(const std::function<double(double)>& q, const std::vector<double>& breaks,
                                     double k, double A, double T, int samples) {
  require(k > 0 && A > 0 && T > 0, ErrorKind::Contract, "need k, A, T > 0");
  require(T <= pi / std::sqrt(k), ErrorKind::Precondition, "horizon beyond the first zero of the lower bound");
  std::vector<double> cuts{0.0};
  for (double b : breaks)
    if (b > 0 && b < T) cuts.push_back(b);
  cuts.push_back(T);
  std::sort(cuts.begin(), cuts.end());
  GronwallReport rep;
  rep.horizon = T;
  rep.lower_margin = rep.upper_margin = INFINITY;
  rep.lower_gap = rep.upper_gap = -INFINITY;
  const double sk = std::sqrt(k);
  auto record = [&](double t, double v) {
    if (v < 0) rep.v_negative = true;
    double lo = A * std::sin(sk * t) / sk, hi = A * std::sinh(sk * t) / sk;
    rep.lower_margin = std::min(rep.lower_margin, v - lo);
    rep.upper_margin = std::min(rep.upper_margin, hi - v);
    rep.lower_gap = std::max(rep.lower_gap, v - lo);
    rep.upper_gap = std::max(rep.upper_gap, hi - v);
  };
  State s{0.0, A};
  // integrate piece by piece, evaluating q strictly inside the piece so the
  // right-hand side is smooth on every step
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    double a = cuts[p], b = cuts[p + 1];
    if (b <= a) continue;
    double lo = std::nextafter(a, b), hi = std::nextafter(b, a);
    auto sys = [&](const State& y, State& dy, double t) {
      dy.resize(2);
      dy[0] = y[1];
      dy[1] = q(std::clamp(t, lo, hi)) * y[0];
    };
    std::vector<double> ts{a};
    for (int i = 0; i <= samples; ++i) {
      double t = T * i / samples;
      if (t > a && t < b) ts.push_back(t);
    }
    ts.push_back(b);
    auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, sys, s, ts.begin(), ts.end(), 1e-3, [&](const State& y, double t) { record(t, y[0]); });
  }
  return rep;
}

double curvature_bound(const RiemannianModel& M, const Vec& m, double radius) {
  if (M.kind == ModelKind::ConstantCurvature) return std::abs(M.kappa);
  const int dirs = 24, steps = 24;
  std::vector<double> ts;
  for (int i = 0; i <= steps; ++i) ts.push_back(radius * i / steps);
  std::vector<double> best(dirs, 0.0);
  Mat E = orthonormal_frame(M, m);
  parallel_for(dirs, [&](std::size_t j) {
    double a = 2 * pi * static_cast<double>(j) / dirs;
    Vec u = E * Vec{{std::cos(a), std::sin(a)}};
    for (auto& g : geodesic(M, m, u, ts)) best[j] = std::max(best[j], std::abs(M.sectional(g.x)));
  });
  return *std::max_element(best.begin(), best.end());
}

namespace {

Vec random_unit(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  Vec v(d);
  do {
    for (int i = 0; i < d; ++i) v[i] = n(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

double rauch_bound(double k, double t) {
  if (k == 0 || t == 0) return 0;
  double a = std::sqrt(k) * t;
  return std::sinh(a) / a - 1;
}

}  // namespace

RauchReport rauch_deviation_check(const RiemannianModel& M, const Vec& m, double radius, std::size_t samples,
                                  std::uint64_t seed, double k_bound) {
  require(radius > 0 && samples > 0, ErrorKind::Contract, "need a positive radius and samples");
  RauchReport rep;
  rep.k_bound = k_bound >= 0 ? k_bound : curvature_bound(M, m, radius);
  rep.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Vec> xs;
  for (std::size_t i = 0; i < samples; ++i)
    xs.push_back(random_unit(rng, M.dim) * radius * std::pow(u(rng), 1.0 / M.dim));
  std::vector<double> dev(samples), viol(samples), gauss(samples);
  parallel_for(samples, [&](std::size_t i) {
    Mat A = exp_differential(M, m, xs[i]);
    Eigen::JacobiSVD<Mat> svd(A - Mat::Identity(M.dim, M.dim));
    dev[i] = svd.singularValues()[0];
    viol[i] = dev[i] - rauch_bound(rep.k_bound, xs[i].norm());
    double t = xs[i].norm();
    gauss[i] = t > 0 ? std::abs((A * xs[i] / t).norm() - 1) : 0;
  });
  for (std::size_t i = 0; i < samples; ++i) {
    rep.max_violation = std::max(rep.max_violation, viol[i]);
    rep.max_deviation = std::max(rep.max_deviation, dev[i]);
    rep.radial_sv_error = std::max(rep.radial_sv_error, gauss[i]);
  }
  return rep;
}

CurvatureRadius curvature_radius(const RiemannianModel& M, const Vec& y0, int a, int max_order, double cap) {
  require(max_order >= 0 && max_order <= 1, ErrorKind::Contract, "curvature derivatives are available to order 1");
  require(cap > 0, ErrorKind::Contract, "cap must be positive");
  const double thr = std::pow(10.0, -2.0 * a);
  CurvatureRadius out;
  if (M.kind == ModelKind::ConstantCurvature) {
    if (M.kappa == 0) return {cap, true, 1};
    out.radius = std::min(cap, std::pow(10.0, -a) / std::sqrt(std::abs(M.kappa)));
    out.capped = out.radius == cap;
    return out;
  }
  const int dirs = 16, steps = 400;
  std::vector<double> ts;
  for (int i = 0; i <= steps; ++i) ts.push_back(cap * i / steps);
  // running sup over directions of each derivative order at geodesic distance t
  std::vector<std::vector<double>> val(max_order + 1, std::vector<double>(ts.size(), 0.0));
  Mat E = orthonormal_frame(M, y0);
  std::vector<std::vector<GeodesicState>> paths(dirs);
  parallel_for(dirs, [&](std::size_t j) {
    double ang = 2 * pi * static_cast<double>(j) / dirs;
    paths[j] = geodesic(M, y0, E * Vec{{std::cos(ang), std::sin(ang)}}, ts);
  });
  for (auto& path : paths)
    for (std::size_t i = 0; i < ts.size(); ++i) {
      val[0][i] = std::max(val[0][i], std::abs(M.sectional(path[i].x)));
      if (max_order >= 1) val[1][i] = std::max(val[1][i], M.curvature_gradient(path[i].x));
    }
  out.radius = cap;
  out.capped = true;
  for (int l = 0; l <= max_order; ++l) {
    double sup = 0;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      sup = std::max(sup, val[l][i]);
      double rc = sup > 0 ? std::pow(thr / sup, 1.0 / (2 + l)) : INFINITY;
      if (rc <= ts[i + 1]) {
        double r = std::max(rc, ts[i]);
        if (r < out.radius) {
          out.radius = r;
          out.capped = false;
        }
        break;
      }
    }
  }
  return out;
}

AdmissibleA admissible_a() {
  auto ratio = [](int a) {
    double x = std::pow(10.0, -a);
    return std::sinh(x) / x;
  };
  AdmissibleA out;
  // the curvature thresholds 10^-2a are used with a >= 1
  for (int a = 1;; ++a)
    if (ratio(a) < 2 && ratio(a) <= 1.5) {
      out.a = a;
      out.ratio = ratio(a);
      break;
    }
  out.zero_also_passes = ratio(0) < 2 && ratio(0) <= 1.5;
  return out;
}

EigenRange metric_equivalence_check(const RiemannianModel& M, const Vec& y0, double r, int n_radial, int n_dir) {
  require(r > 0 && n_radial > 0 && n_dir > 0, ErrorKind::Contract, "bad sampling parameters");
  std::vector<Vec> vs;
  const int d = M.dim;
  for (int i = 1; i <= n_radial; ++i) {
    double rad = r * i / n_radial;
    for (int j = 0; j < n_dir; ++j) {
      double a = 2 * pi * j / n_dir;
      Vec v = Vec::Zero(d);
      v[0] = std::cos(a);
      v[1] = std::sin(a);
      if (d == 3) {
        double b = pi * (j % 3 + 1) / 4;
        v = Vec{{std::cos(a) * std::sin(b), std::sin(a) * std::sin(b), std::cos(b)}};
      }
      vs.push_back(rad * v);
    }
  }
  std::vector<EigenRange> part(vs.size());
  parallel_for(vs.size(), [&](std::size_t i) {
    Mat A = exp_differential(M, y0, vs[i]);
    Eigen::SelfAdjointEigenSolver<Mat> es(A.transpose() * A);
    part[i] = {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  });
  EigenRange out{1, 1};
  for (auto& p : part) {
    out.lo = std::min(out.lo, p.lo);
    out.hi = std::max(out.hi, p.hi);
  }
  return out;
}

InversionRadius inversion_radius(const SmoothMap& f, const Vec& a, double u_radius, std::size_t pairs,
                                 std::uint64_t seed) {
  require(a.size() == f.dim && u_radius > 0, ErrorKind::Contract, "bad inversion inputs");
  Eigen::JacobiSVD<Mat> svd(f.df(a));
  double smin = svd.singularValues()[f.dim - 1];
  require(smin > 1e-14 * std::max(1.0, svd.singularValues()[0]), ErrorKind::Precondition, "df_a is singular");
  const double inv_norm = 1 / smin;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  auto sample_ball = [&](double r) {
    Vec x = a + random_unit(rng, f.dim) * r * std::pow(u(rng), 1.0 / f.dim);
    return x;
  };
  // ||d^2 f|| as a bilinear map, bounded by the root sum of squared Hessian norms
  auto d2norm = [&](const Vec& x) {
    double s = 0;
    for (const auto& H : f.d2f(x)) {
      Eigen::JacobiSVD<Mat> hs(H);
      s += std::pow(hs.singularValues()[0], 2);
    }
    return std::sqrt(s);
  };
  double sup = d2norm(a);
  for (int i = 0; i < 4000; ++i) sup = std::max(sup, d2norm(sample_ball(u_radius)));
  InversionRadius out;
  out.certified_ratio = 1 / (2 * inv_norm);
  if (sup == 0) {
    out.unbounded = true;
    out.rho = u_radius;
  } else {
    out.rho = std::min(u_radius, 1 / (6 * inv_norm * sup));
  }
  out.min_ratio = INFINITY;
  for (std::size_t i = 0; i < pairs; ++i) {
    Vec x = sample_ball(out.rho), y = sample_ball(out.rho);
    double dx = (x - y).norm();
    if (dx == 0) continue;
    out.min_ratio = std::min(out.min_ratio, (f.f(x) - f.f(y)).norm() / dx);
  }
  out.injective = out.min_ratio >= out.certified_ratio;
  return out;
}

Vec poincare_primitive(const TwoForm& v, const Vec& x, int nodes) {
  std::vector<double> gx, gw;
  gauss_legendre(nodes, gx, gw);
  Mat W = Mat::Zero(x.size(), x.size());
  for (std::size_t q = 0; q < gx.size(); ++q) {
    double t = 0.5 * (gx[q] + 1);
    W += 0.5 * gw[q] * t * v(t * x);
  }
  return W.transpose() * x;
}

namespace {

// fourth order central difference of a vector field along coordinate a
Vec partial(const std::function<Vec(const Vec&)>& F, const Vec& x, int a, double h = 1e-3) {
  auto at = [&](double s) {
    Vec y = x;
    y[a] += s;
    return F(y);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

double form_norm(const Mat& V) { return V.norm() / std::sqrt(2.0); }

}  // namespace

PoincarePrimitive poincare_check(const TwoForm& v, int dim, double radius, std::size_t samples, std::uint64_t seed) {
  require(dim == 2 || dim == 3, ErrorKind::Contract, "dimension must be 2 or 3");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  PoincarePrimitive out;
  auto U = [&](const Vec& x) { return poincare_primitive(v, x); };
  for (std::size_t s = 0; s < samples; ++s) {
    Vec x = random_unit(rng, dim) * radius * std::pow(u(rng), 1.0 / dim);
    Mat V = v(x);
    if (dim == 3) {
      // (dv)_012 = d_0 v_12 + d_1 v_20 + d_2 v_01
      double c = 0;
      for (int a = 0; a < 3; ++a) {
        int b = (a + 1) % 3, e = (a + 2) % 3;
        auto col = [&](const Vec& y) { return Vec{{v(y)(b, e)}}; };
        c += partial(col, x, a)[0];
      }
      out.closedness = std::max(out.closedness, std::abs(c));
    }
    std::vector<Vec> dU;
    for (int a = 0; a < dim; ++a) dU.push_back(partial(U, x, a));
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        out.dU_residual = std::max(out.dU_residual, std::abs(dU[a][b] - dU[b][a] - V(a, b)));
    out.sup_U = std::max(out.sup_U, U(x).norm());
    out.sup_v = std::max(out.sup_v, form_norm(V));
  }
  require(out.closedness <= 1e-6 * std::max(1.0, out.sup_v), ErrorKind::Precondition, "two-form is not closed");
  out.c1 = out.sup_v > 0 ? out.sup_U / out.sup_v : 0;
  return out;
}

double patch_radius(double ds_inverse_norm, double d2s_sup) {
  require(ds_inverse_norm > 0 && d2s_sup >= 0, ErrorKind::Contract, "bad patch radius inputs");
  if (d2s_sup == 0) return INFINITY;
  return 1 / (24 * ds_inverse_norm * d2s_sup);
}

std::vector<GeomRow> gronwall_suite(std::size_t cases, std::uint64_t seed) {
  std::vector<GeomRow> rows;
  for (double k : {0.1, 1.0, 10.0}) {
    const double T = gronwall_horizon(k), tol = 1e-6;
    std::vector<GronwallReport> reps(cases);
    parallel_for(cases, [&](std::size_t i) {
      auto q = random_q(k, T, seed + 7919 * i + static_cast<std::uint64_t>(k * 1000));
      reps[i] = gronwall_bounds_check([&](double t) { return q.at(t); }, q.breaks, k, 1.0, T);
    });
    double lo = INFINITY, hi = INFINITY;
    bool neg = false;
    for (auto& r : reps) {
      lo = std::min(lo, r.lower_margin);
      hi = std::min(hi, r.upper_margin);
      neg = neg || r.v_negative;
    }
    std::string tag = "k=" + std::to_string(k).substr(0, std::to_string(k).find_last_not_of('0') + 1);
    if (tag.back() == '.') tag.pop_back();
    rows.push_back({"gronwall_lower_margin_" + tag, lo, 0, tol, lo >= -tol && !neg});
    rows.push_back({"gronwall_upper_margin_" + tag, hi, 0, tol, hi >= -tol && !neg});
    auto up = gronwall_bounds_check([k](double) { return k; }, {}, k, 1.0, T);
    double up_err = std::max(std::abs(up.upper_gap), std::abs(up.upper_margin));
    rows.push_back({"gronwall_saturate_upper_" + tag, up_err, 0, 1e-8, up_err <= 1e-8});
    auto dn = gronwall_bounds_check([k](double) { return -k; }, {}, k, 1.0, T);
    double dn_err = std::max(std::abs(dn.lower_gap), std::abs(dn.lower_margin));
    rows.push_back({"gronwall_saturate_lower_" + tag, dn_err, 0, 1e-8, dn_err <= 1e-8});
  }
  return rows;
}

std::vector<GeomRow> rauch_suite(const RiemannianModel& M, double radius, std::size_t samples, std::uint64_t seed) {
  std::vector<GeomRow> rows;
  const Vec m = Vec::Zero(M.dim);
  const double kb = M.kind == ModelKind::ConstantCurvature && M.kappa == 0 ? 0.0 : curvature_bound(M, m, radius);
  auto rep = rauch_deviation_check(M, m, radius, samples, seed, kb);
  const double tol = 1e-8;
  rows.push_back({"rauch_bound_" + M.name, rep.max_violation, 0, tol, rep.max_violation <= tol});
  rows.push_back({"gauss_lemma_" + M.name, rep.radial_sv_error, 0, tol, rep.radial_sv_error <= tol});
  if (M.kind == ModelKind::ConstantCurvature && M.kappa < 0) {
    // every normal direction saturates, so deviation equals the bound
    rows.push_back({"rauch_saturation_" + M.name, std::abs(rep.max_violation), 0, 1e-6,
                    std::abs(rep.max_violation) <= 1e-6});
  }
  auto cr = curvature_radius(M, m, 1, M.kind == ModelKind::ConstantCurvature ? 0 : 1, std::min(radius, 1.0));
  rows.push_back({"curvature_radius_a1_" + M.name, cr.radius, 0, 0, cr.radius > 0});
  auto eq = metric_equivalence_check(M, m, cr.radius);
  rows.push_back({"metric_equivalence_min_" + M.name, eq.lo, 0.5, 0, eq.lo >= 0.5});
  rows.push_back({"metric_equivalence_max_" + M.name, eq.hi, 2, 0, eq.hi <= 2});
  return rows;
}

std::vector<GeomRow> auxiliary_suite(std::uint64_t seed) {
  std::vector<GeomRow> rows;
  auto a = admissible_a();
  rows.push_back({"admissible_a", static_cast<double>(a.a), 1, 0, a.a == 1 && a.ratio < 1.5});
  rows.push_back({"admissible_a_zero_also_passes", a.zero_also_passes ? 1.0 : 0.0, 1, 0, a.zero_also_passes});
  SmoothMap quad;
  quad.dim = 1;
  quad.f = [](const Vec& x) { return Vec{{x[0] + 0.5 * x[0] * x[0]}}; };
  quad.df = [](const Vec& x) { return Mat{{1 + x[0]}}; };
  quad.d2f = [](const Vec&) { return std::vector<Mat>{Mat{{1.0}}}; };
  auto inv = inversion_radius(quad, Vec::Zero(1), 1.0, 10000, seed);
  rows.push_back({"inversion_radius_quadratic", inv.rho, 1.0 / 6, 1e-12, std::abs(inv.rho - 1.0 / 6) < 1e-12 && inv.injective});
  auto vconst = [](const Vec&) { return Mat{{0.0, 1.0}, {-1.0, 0.0}}; };
  auto pc = poincare_check(vconst, 2, 1.0, 200, seed);
  rows.push_back({"poincare_primitive_residual", pc.dU_residual, 0, 1e-8, pc.dU_residual < 1e-8 && pc.c1 <= 1.0});
  return rows;
}

std::vector<GeomRow> geom_suite(const RiemannianModel& M, double radius, std::uint64_t seed) {
  auto rows = gronwall_suite(1000, seed);
  auto r = rauch_suite(M, radius, 1000, seed);
  rows.insert(rows.end(), r.begin(), r.end());
  auto x = auxiliary_suite(seed);
  rows.insert(rows.end(), x.begin(), x.end());
  return rows;
}

std::string rows_csv(const std::vector<GeomRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "name,measured,bound,tolerance,pass\n";
  for (auto& r : rows)
    os << r.name << ',' << r.measured << ',' << r.bound << ',' << r.tolerance << ',' << (r.pass ? "true" : "false")
       << '\n';
  return os.str();
}

}  // namespace jetex::geom
