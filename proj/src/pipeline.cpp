#include "jetex/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "jetex/bump.hpp"
#include "jetex/dbar.hpp"
#include "jetex/error.hpp"
#include "jetex/jets.hpp"
#include "jetex/linalg.hpp"
#include "jetex/parallel.hpp"
#include "jetex/polar.hpp"

namespace jetex::pipeline {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::numbers::pi;

double ExtensionProblem::s_scale() const {
  auto dom = setup == Setup::A ? ModelDomain::disc(radius) : ModelDomain::polydisc(radius, radius2);
  return 1 / (std::exp(1.0) * dom.diameter());
}

void ExtensionProblem::validate() const {
  require(radius > 0 && radius2 > 0, ErrorKind::Contract, "radii must be positive");
  require(k >= 0, ErrorKind::Contract, "k must be nonnegative");
  require(free_degree > k, ErrorKind::Contract, "free degree must exceed k");
  require(excision > 0 && excision < radius / 4, ErrorKind::Contract, "excision must lie in (0, R/4)");
  require(panel_nodes >= 4 && n_theta > 2 * free_degree, ErrorKind::Contract, "grid too coarse for the basis");
  if (setup == Setup::A) {
    require(jet.size() == static_cast<std::size_t>(k + 1), ErrorKind::Contract, "setup A needs k+1 jet coefficients");
  } else {
    require(jet_polys.size() == static_cast<std::size_t>(k + 1), ErrorKind::Contract,
            "setup B needs k+1 coefficient polynomials");
  }
}

double radius_of_s(const ExtensionProblem& p, double t) { return t / p.s_scale(); }

namespace {

LayoutOptions layout_for(const ExtensionProblem& p, double eps) {
  LayoutOptions o;
  o.panel_nodes = p.panel_nodes;
  for (double t : {eps / std::sqrt(2.0), eps}) {
    double r = radius_of_s(p, t);
    if (r > p.excision * 1.01 && r < p.radius * 0.99) o.extra_breaks.push_back(r);
  }
  return o;
}

std::vector<cplx> eval_poly(const std::vector<cplx>& c, std::span<const cplx> z) {
  std::vector<cplx> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    cplx v = 0;
    for (std::size_t m = c.size(); m-- > 0;) v = v * z[i] + c[m];
    out[i] = v;
  }
  return out;
}

struct PlanarRun {
  std::vector<cplx> coeffs;
  std::vector<LevelRecord> levels;
  double jet_residual = 0;
  std::vector<int> resolution;
};

// Induction in z1 for a fixed z2: F_j = G - u + F_{j-1}, level by level.
PlanarRun planar_induction(const ExtensionProblem& p, double eps, const std::vector<cplx>& a, cplx z2) {
  auto dp = DbarProblem::make(ModelDomain::disc(p.radius), {p.panel_nodes, p.n_theta}, p.excision,
                              layout_for(p, eps));
  const auto& grid = dp.grid;
  const auto& L = grid.fibers[0].layout;
  const double c = p.s_scale();
  const std::size_t n = grid.size();
  dp.weight.s_scale = c;
  dp.weight.phi.resize(n);
  std::vector<double> s_abs(n);
  for (std::size_t i = 0; i < n; ++i) {
    dp.weight.phi[i] = p.phi_at(grid.z1[i], z2);
    s_abs[i] = c * std::abs(grid.z1[i]);
  }
  auto f = eval_poly(a, grid.z1);
  const int D = p.free_degree;
  std::vector<cplx> Fc(D + 1, 0.0);
  std::vector<cplx> Fs(n, 0.0), Fnew;
  const std::size_t fit_ring = polar::nearest_ring(L, 0.8 * p.radius);
  const std::size_t check_ring = polar::nearest_ring(L, 0.3 * p.radius);
  auto gram = weighted_gram(p, z2);

  PlanarRun out;
  out.resolution = {static_cast<int>(L.n_radial()), L.n_theta};
  for (int j = 0; j <= p.k; ++j) {
    auto G = truncate(f, Fs, s_abs, eps);
    for (std::size_t i = 0; i < n; ++i) {
      // dbar of theta(|s|^2/eps^2) is theta' s conj(s') / eps^2 with s = c z
      double t = s_abs[i] * s_abs[i] / (eps * eps);
      dp.g[i] = bump::theta_d1(t) * c * c * grid.z1[i] / (eps * eps) * (f[i] - Fs[i]);
    }
    auto sol = singular_weight_solve(dp, j, D);
    Fnew.resize(n);
    for (std::size_t i = 0; i < n; ++i) Fnew[i] = G[i] - sol.u[i] + Fs[i];
    Fc = polar::ring_coefficients(L, Fnew, fit_ring, 0, D);
    LevelRecord rec;
    rec.level = j;
    rec.u_weighted_norm2 = sol.weighted_norm2;
    rec.u_taylor = sol.max_taylor;
    rec.dbar_residual = sol.dbar_residual;
    std::vector<cplx> zero(n, 0.0);
    rec.holomorphy = dbar_residual(grid, Fnew, zero);
    VectorXcd v = Eigen::Map<const VectorXcd>(Fc.data(), D + 1);
    rec.weighted_norm2 = (v.adjoint() * gram * v)(0).real();
    out.levels.push_back(rec);
    Fs = eval_poly(Fc, grid.z1);
  }
  auto jet = polar::ring_coefficients(L, Fnew, check_ring, 0, p.k);
  for (int j = 0; j <= p.k; ++j) out.jet_residual = std::max(out.jet_residual, std::abs(jet[j] - a[j]));
  out.coeffs = Fc;
  return out;
}

QuadGrid y_grid(const ExtensionProblem& p) {
  return grid_from_layout(make_polar_layout(0.0, 0.0, p.radius2, p.y_radial, p.y_theta));
}

cplx poly_at(const std::vector<cplx>& c, cplx z) {
  cplx v = 0;
  for (std::size_t m = c.size(); m-- > 0;) v = v * z + c[m];
  return v;
}

}  // namespace

QuadGrid induction_grid(const ExtensionProblem& p, double eps) {
  return make_grid(ModelDomain::disc(p.radius), {p.panel_nodes, p.n_theta}, p.excision, layout_for(p, eps));
}

SmoothExtension smooth_extension(const ExtensionProblem& p, const QuadGrid& grid, int charts,
                                 const std::vector<cplx>& h) {
  require(charts == 1 || charts == 2, ErrorKind::Contract, "one or two charts");
  require(p.setup == Setup::A && grid.dim == 1, ErrorKind::UnsupportedGeometry, "smooth extension is planar");
  require(p.jet.size() == static_cast<std::size_t>(p.k + 1), ErrorKind::Contract, "jet size");
  const double c = p.s_scale(), w = 0.5 * p.radius;
  // chart 1 covers Re z < w, chart 2 covers Re z > -w; both contain Y
  auto part = [&](cplx z) {
    double x = std::clamp((z.real() + w) / (2 * w), 0.0, 1.0);
    return 1 - x * x * x * (10 + x * (-15 + 6 * x));
  };
  auto part_dbar = [&](cplx z) {
    double x = (z.real() + w) / (2 * w);
    if (x <= 0 || x >= 1) return cplx(0);
    // dbar = (d_x + i d_y)/2
    return cplx(-30 * x * x * (1 - x) * (1 - x) / (2 * w) / 2, 0);
  };
  SmoothExtension out;
  const std::size_t n = grid.size();
  out.f.resize(n);
  out.dbar_exact.assign(n, 0.0);
  double h_sup = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx z = grid.z1[i];
    cplx f1 = poly_at(p.jet, z);
    if (charts == 1) {
      out.f[i] = f1;
      continue;
    }
    cplx hv = poly_at(h, z);
    h_sup = std::max(h_sup, std::abs(hv));
    cplx diff = std::pow(c * z, p.k + 1) * hv;  // f2 - f1
    double t1 = part(z);
    out.f[i] = t1 * f1 + (1 - t1) * (f1 + diff);
    out.dbar_exact[i] = -part_dbar(z) * diff;
  }
  out.dbar_grid.assign(n, 0.0);
  for (const auto& fib : grid.fibers) {
    std::span<const cplx> fs(out.f.data() + fib.offset, fib.layout.size());
    auto d = polar::dbar(fib.layout, fs);
    std::copy(d.begin(), d.end(), out.dbar_grid.begin() + static_cast<std::ptrdiff_t>(fib.offset));
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sa = c * std::abs(grid.z1[i]);
    if (sa > 0) out.decay_ratio = std::max(out.decay_ratio, std::abs(out.dbar_exact[i]) / std::pow(sa, p.k + 1));
  }
  out.decay_bound = charts == 1 ? 0 : 30.0 / 16 / (4 * w) * h_sup;
  return out;
}

std::vector<cplx> truncate(std::span<const cplx> f, std::span<const cplx> F_prev, std::span<const double> s_abs,
                           double eps) {
  require(f.size() == F_prev.size() && f.size() == s_abs.size(), ErrorKind::Contract, "truncate: alignment");
  require(eps > 0 && eps < std::exp(-1.0), ErrorKind::Precondition, "eps must lie in (0, 1/e)");
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double t = s_abs[i] * s_abs[i] / (eps * eps);
    out[i] = t >= 1 ? cplx(0) : bump::theta(t) * (f[i] - F_prev[i]);
  }
  return out;
}

MatrixXcd weighted_gram(const ExtensionProblem& p, cplx z2) {
  auto grid = make_grid(ModelDomain::disc(p.radius), {p.panel_nodes, p.n_theta}, p.excision,
                        LayoutOptions{.grading = 2.0, .panel_nodes = p.panel_nodes, .extra_breaks = {}});
  WeightField w;
  w.singular_exponent = 1;
  w.log_factor = true;
  w.s_scale = p.s_scale();
  w.phi.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) w.phi[i] = p.phi_at(grid.z1[i], z2);
  auto dens = w.density(grid);
  auto basis = BasisSpec::upto(1, p.free_degree);
  MatrixXcd B = basis_samples(grid, basis);
  Eigen::VectorXd cw(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) cw[i] = grid.weights[i] * dens[i];
  MatrixXcd G = B.adjoint() * cw.asDiagonal() * B;
  // hole |z| < delta: int dA / (c^2 |z|^2 log^2(c|z|)) = 2 pi / (c^2 (-log(c delta)))
  const double c = p.s_scale();
  G(0, 0) += 2 * pi * std::exp(-p.phi_at(0.0, z2)) / (c * c * -std::log(c * p.excision));
  return G;
}

double weighted_norm2(const ExtensionProblem& p, const std::vector<cplx>& coeffs) {
  auto G = weighted_gram(p);
  VectorXcd v = VectorXcd::Zero(G.rows());
  for (std::size_t m = 0; m < coeffs.size() && static_cast<Eigen::Index>(m) < v.size(); ++m) v[m] = coeffs[m];
  for (std::size_t m = G.rows(); m < coeffs.size(); ++m)
    require(coeffs[m] == cplx(0), ErrorKind::Contract, "polynomial exceeds the basis degree");
  return (v.adjoint() * G * v)(0).real();
}

double jet_norm2(const ExtensionProblem& p) {
  const double c = p.s_scale();
  if (p.setup == Setup::A) {
    auto jet = JetData::point(1, p.k, p.jet);
    auto s = SectionData::linear(1, 1, c, 1);
    std::vector<double> rho{rho_weight(s, 0)}, phi{p.phi_at(0.0)};
    return l2_jet_norm(jet, s, rho, phi, point_grid(0.0));
  }
  auto yg = y_grid(p);
  auto jet = JetData::zeros(1, p.k, yg.size());
  std::vector<double> phi(yg.size());
  for (std::size_t y = 0; y < yg.size(); ++y) {
    for (int m = 0; m <= p.k; ++m) jet.values[m][y] = poly_at(p.jet_polys[m], yg.z1[y]);
    phi[y] = p.phi_at(0.0, yg.z1[y]);
  }
  auto s = SectionData::linear(1, 2, c, yg.size());
  std::vector<double> rho(yg.size(), rho_weight(s, 0));
  return l2_jet_norm(jet, s, rho, phi, yg);
}

ExtensionResult run_induction(const ExtensionProblem& p, double eps) {
  p.validate();
  require(eps > 0 && eps < std::exp(-1.0), ErrorKind::Precondition, "eps must lie in (0, 1/e)");
  require(radius_of_s(p, eps / std::sqrt(2.0)) >= 8 * p.excision, ErrorKind::Precondition,
          "eps too small: cutoff annulus collides with the excision");
  ExtensionResult out;
  out.eps = eps;
  if (p.setup == Setup::A) {
    auto run = planar_induction(p, eps, p.jet, 0.0);
    out.coeffs = run.coeffs;
    out.levels = run.levels;
    out.jet_residual = run.jet_residual;
    out.grid_resolution = run.resolution;
    out.weighted_norm2 = run.levels.back().weighted_norm2;
  } else {
    auto yg = y_grid(p);
    std::vector<PlanarRun> runs(yg.size());
    parallel_for(yg.size(), [&](std::size_t y) {
      std::vector<cplx> a(p.k + 1);
      for (int m = 0; m <= p.k; ++m) a[m] = poly_at(p.jet_polys[m], yg.z1[y]);
      runs[y] = planar_induction(p, eps, a, yg.z1[y]);
    });
    out.levels.resize(p.k + 1);
    for (std::size_t y = 0; y < yg.size(); ++y) {
      out.fiber_coeffs.push_back(runs[y].coeffs);
      out.jet_residual = std::max(out.jet_residual, runs[y].jet_residual);
      for (int j = 0; j <= p.k; ++j) {
        auto& L = out.levels[j];
        const auto& R = runs[y].levels[j];
        L.level = j;
        L.u_weighted_norm2 += yg.weights[y] * R.u_weighted_norm2;
        L.weighted_norm2 += yg.weights[y] * R.weighted_norm2;
        L.u_taylor = std::max(L.u_taylor, R.u_taylor);
        L.dbar_residual = std::max(L.dbar_residual, R.dbar_residual);
        L.holomorphy = std::max(L.holomorphy, R.holomorphy);
      }
    }
    out.weighted_norm2 = out.levels.back().weighted_norm2;
    out.grid_resolution = runs.front().resolution;
    out.grid_resolution.push_back(p.y_radial);
    out.grid_resolution.push_back(p.y_theta);
    // each z1-coefficient should be a polynomial in z2; fit degree <= half the Y nodes
    int deg = std::min<int>(p.free_degree, static_cast<int>(yg.size()) / 2);
    MatrixXcd V(yg.size(), deg + 1);
    for (std::size_t y = 0; y < yg.size(); ++y)
      for (int d = 0; d <= deg; ++d) V(y, d) = std::pow(yg.z1[y] / p.radius2, d);
    Eigen::ColPivHouseholderQR<MatrixXcd> qr(V);
    for (int m = 0; m <= p.free_degree; ++m) {
      VectorXcd col(yg.size());
      for (std::size_t y = 0; y < yg.size(); ++y) col[y] = runs[y].coeffs[m];
      VectorXcd res = V * qr.solve(col) - col;
      out.z2_holomorphy = std::max(out.z2_holomorphy, res.cwiseAbs().maxCoeff());
    }
  }
  out.jet_norm2 = jet_norm2(p);
  out.ratio = out.jet_norm2 > 0 ? out.weighted_norm2 / out.jet_norm2 : 0;
  return out;
}

std::vector<double> default_eps_schedule() { return {1e-1, 3e-2, 1e-2}; }

Schedule run_schedule(const ExtensionProblem& p, const std::vector<double>& eps_list) {
  require(eps_list.size() >= 2, ErrorKind::Contract, "schedule needs at least two eps");
  for (double e : eps_list)
    require(radius_of_s(p, e / std::sqrt(2.0)) >= 8 * p.excision, ErrorKind::Precondition,
            "eps too small: cutoff annulus collides with the excision");
  Schedule s;
  s.runs.resize(eps_list.size());
  for (std::size_t i = 0; i < eps_list.size(); ++i) s.runs[i] = run_induction(p, eps_list[i]);
  const auto& a = s.runs[s.runs.size() - 2];
  const auto& b = s.runs.back();
  // linear extrapolation in eps to eps = 0
  double t = b.eps / (a.eps - b.eps);
  s.extrapolated_norm2 = b.weighted_norm2 - t * (a.weighted_norm2 - b.weighted_norm2);
  for (std::size_t m = 0; m < b.coeffs.size(); ++m)
    s.extrapolated_coeffs.push_back(b.coeffs[m] - t * (a.coeffs[m] - b.coeffs[m]));
  s.last_change = std::abs(a.weighted_norm2 - b.weighted_norm2);
  double l = std::log(a.eps);
  s.envelope = (a.eps + 1 / (l * l)) * b.weighted_norm2;
  return s;
}

Extension minimal_extension(const ExtensionProblem& p) {
  p.validate();
  require(p.setup == Setup::A, ErrorKind::UnsupportedGeometry, "minimal extension is implemented for setup A");
  auto G = weighted_gram(p);
  auto basis = BasisSpec::upto(1, p.free_degree);
  auto cons = point_jet_constraints(basis, JetData::point(1, p.k, p.jet), 0.0);
  Extension e;
  e.coeffs = linalg::kkt_minimize(G, cons.C, cons.d).x;
  e.norm2 = (e.coeffs.adjoint() * G * e.coeffs)(0).real();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(G);
  e.condition = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  return e;
}

ConstantEstimate measure_constant(const ExtensionProblem& base, std::size_t n_jets, std::uint64_t seed, double eps) {
  require(base.setup == Setup::A, ErrorKind::UnsupportedGeometry, "constant batch runs on setup A");
  require(n_jets >= 1, ErrorKind::Contract, "empty batch");
  const int nb = base.k + 1;
  // jets are drawn isotropic for the jet norm: order j is scaled by its basis norm
  std::vector<double> unit(nb);
  for (int j = 0; j < nb; ++j) {
    ExtensionProblem e = base;
    e.jet.assign(nb, 0.0);
    e.jet[j] = 1.0;
    unit[j] = std::sqrt(jet_norm2(e));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<std::vector<cplx>> jets;
  while (jets.size() < n_jets) {
    std::vector<cplx> a(nb);
    double mag = 0;
    for (int j = 0; j < nb; ++j) {
      a[j] = cplx(nd(rng), nd(rng)) / unit[j];
      mag += std::norm(a[j]);
    }
    if (mag > 0) jets.push_back(a);
  }
  std::vector<double> ratios(n_jets);
  std::vector<ExtensionResult> basis_runs(nb);
  parallel_for(n_jets + nb, [&](std::size_t i) {
    ExtensionProblem p = base;
    if (i < n_jets) {
      p.jet = jets[i];
      ratios[i] = run_induction(p, eps).ratio;
    } else {
      p.jet.assign(nb, 0.0);
      p.jet[i - n_jets] = 1.0;
      basis_runs[i - n_jets] = run_induction(p, eps);
    }
  });
  ConstantEstimate out;
  out.ratios = ratios;
  out.sup = *std::max_element(ratios.begin(), ratios.end());
  out.spread = out.sup / *std::min_element(ratios.begin(), ratios.end());
  // the construction is linear in the jet, so the sup over all jets is a generalized eigenvalue
  auto G = weighted_gram(base);
  MatrixXcd V(G.rows(), nb);
  for (int j = 0; j < nb; ++j)
    for (Eigen::Index m = 0; m < G.rows(); ++m) V(m, j) = basis_runs[j].coeffs[m];
  MatrixXcd N = V.adjoint() * G * V;
  Eigen::VectorXd jn(nb);
  for (int j = 0; j < nb; ++j) jn[j] = basis_runs[j].jet_norm2;
  Eigen::VectorXd is = jn.cwiseSqrt().cwiseInverse();
  MatrixXcd M = is.asDiagonal() * N * is.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(linalg::hermitize(M));
  out.operator_sup = es.eigenvalues().maxCoeff();
  return out;
}

std::string result_to_json(const ExtensionProblem& p, const ExtensionResult& r) {
  nlohmann::ordered_json j;
  j["setup"] = p.setup == Setup::A ? "A" : "B";
  j["k"] = p.k;
  j["phi"] = p.phi_name;
  j["eps"] = r.eps;
  j["excision"] = p.excision;
  j["grid_resolution"] = r.grid_resolution;
  j["basis_degree"] = p.free_degree;
  auto cjson = [](const std::vector<cplx>& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (auto x : v) a.push_back({x.real(), x.imag()});
    return a;
  };
  if (p.setup == Setup::A) {
    j["jet"] = cjson(p.jet);
    j["coeffs"] = cjson(r.coeffs);
  } else {
    nlohmann::ordered_json jp = nlohmann::ordered_json::array();
    for (auto& poly : p.jet_polys) jp.push_back(cjson(poly));
    j["jet_polys"] = jp;
    j["z2_holomorphy"] = r.z2_holomorphy;
  }
  nlohmann::ordered_json lv = nlohmann::ordered_json::array();
  for (auto& l : r.levels)
    lv.push_back({{"level", l.level},
                  {"weighted_norm2", l.weighted_norm2},
                  {"u_weighted_norm2", l.u_weighted_norm2},
                  {"u_taylor", l.u_taylor},
                  {"dbar_residual", l.dbar_residual},
                  {"holomorphy", l.holomorphy}});
  j["levels"] = lv;
  j["jet_residual"] = r.jet_residual;
  j["weighted_norm2"] = r.weighted_norm2;
  j["jet_norm2"] = r.jet_norm2;
  j["ratio"] = r.ratio;
  return j.dump(2);
}

}  // namespace jetex::pipeline
