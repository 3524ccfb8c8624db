#include "jetex/dbar.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "jetex/error.hpp"
#include "jetex/polar.hpp"
#include "jetex/simd.hpp"

namespace jetex {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

DbarProblem DbarProblem::make(const ModelDomain& domain, std::vector<int> resolution, double excision,
                              LayoutOptions layout) {
  DbarProblem p;
  p.domain = domain;
  p.resolution = std::move(resolution);
  p.excision = excision;
  p.layout = std::move(layout);
  p.grid = make_grid(domain, p.resolution, excision, p.layout);
  p.g.assign(p.grid.size(), 0.0);
  return p;
}

void DbarProblem::validate() const {
  require(g.size() == grid.size(), ErrorKind::Contract, "g not aligned with grid");
  require(weight.phi.empty() || weight.phi.size() == grid.size(), ErrorKind::Contract, "phi not aligned with grid");
  for (auto v : g) require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::Contract, "g not finite");
}

namespace {

template <class F>
std::vector<cplx> per_fiber(const QuadGrid& grid, std::span<const cplx> f, F op) {
  require(f.size() == grid.size(), ErrorKind::Contract, "samples not aligned with grid");
  std::vector<cplx> out(grid.size());
  for (const auto& fib : grid.fibers) {
    auto r = op(fib.layout, f.subspan(fib.offset, fib.layout.size()));
    std::copy(r.begin(), r.end(), out.begin() + static_cast<std::ptrdiff_t>(fib.offset));
  }
  return out;
}

}  // namespace

std::vector<cplx> cauchy_transform(const DbarProblem& p) {
  p.validate();
  return per_fiber(p.grid, p.g, [](const PolarLayout& L, std::span<const cplx> g) {
    return polar::cauchy_transform(L, g);
  });
}

std::vector<cplx> cauchy_transform_direct(const DbarProblem& p) {
  p.validate();
  return per_fiber(p.grid, p.g, [](const PolarLayout& L, std::span<const cplx> g) {
    return polar::cauchy_direct(L, g);
  });
}

double dbar_residual(const QuadGrid& grid, std::span<const cplx> u, std::span<const cplx> g) {
  auto du = per_fiber(grid, u, [](const PolarLayout& L, std::span<const cplx> f) { return polar::dbar(L, f); });
  require(g.size() == grid.size(), ErrorKind::Contract, "g not aligned with grid");
  double r = 0;
  for (std::size_t i = 0; i < du.size(); ++i) r = std::max(r, std::abs(du[i] - g[i]));
  return r;
}

DbarSolution minimal_dbar_solution(const DbarProblem& p, const BasisSpec& basis) {
  auto u0 = cauchy_transform(p);
  auto dens = p.weight.density(p.grid);
  VectorXcd c = bergman_projection(p.grid, dens, basis, u0);
  auto hol = evaluate(p.grid, basis, c);
  DbarSolution s;
  s.u.resize(u0.size());
  for (std::size_t i = 0; i < u0.size(); ++i) s.u[i] = u0[i] - hol[i];
  std::vector<double> cw(p.grid.size());
  std::vector<double> f(p.grid.size());
  for (std::size_t i = 0; i < cw.size(); ++i) {
    cw[i] = p.grid.weights[i] * dens[i];
    f[i] = std::norm(s.u[i]) * dens[i];
  }
  s.norm2 = integrate(p.grid, std::span<const double>(f));
  MatrixXcd B = basis_samples(p.grid, basis);
  for (Eigen::Index a = 0; a < B.cols(); ++a) {
    std::span<const cplx> col(B.col(a).data(), static_cast<std::size_t>(B.rows()));
    s.orthogonality_residual = std::max(s.orthogonality_residual, std::abs(simd::weighted_cdot(cw, col, s.u)));
  }
  s.dbar_residual = dbar_residual(p.grid, s.u, p.g);
  return s;
}

CurvatureOperatorData curvature_from_phi(const QuadGrid& grid, std::span<const double> phi) {
  std::vector<cplx> ph(phi.begin(), phi.end());
  auto lap = per_fiber(grid, ph, [](const PolarLayout& L, std::span<const cplx> f) { return polar::laplacian(L, f); });
  CurvatureOperatorData c;
  c.c.resize(lap.size());
  for (std::size_t i = 0; i < lap.size(); ++i) c.c[i] = lap[i].real() / 4;
  return c;
}

HormanderReport hormander_estimate_check(const DbarProblem& p, double eta, double lambda,
                                         const CurvatureOperatorData& curv, const BasisSpec& basis) {
  require(p.grid.dim == 1, ErrorKind::UnsupportedGeometry, "scalar reduction is planar");
  require(eta > 0 && lambda > 0, ErrorKind::Contract, "eta and lambda must be positive");
  require(p.weight.singular_exponent == 0 && !p.weight.log_factor, ErrorKind::Contract,
          "Hormander check uses the plain weight e^-phi");
  require(curv.c.size() == p.grid.size(), ErrorKind::Contract, "curvature not aligned with grid");
  for (double c : curv.c) require(c > 0, ErrorKind::NotPositive, "curvature factor not positive");
  auto sol = minimal_dbar_solution(p, basis);
  auto dens = p.weight.density(p.grid);
  std::vector<double> l(p.grid.size()), r(p.grid.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    l[i] = std::norm(sol.u[i]) * dens[i] / (eta + lambda);
    r[i] = 2 * std::norm(p.g[i]) * dens[i] / (eta * curv.c[i]);
  }
  HormanderReport rep;
  rep.lhs = integrate(p.grid, std::span<const double>(l));
  rep.rhs = integrate(p.grid, std::span<const double>(r));
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

SingularSolve singular_weight_solve(const DbarProblem& p, int k, int free_degree) {
  p.validate();
  require(p.grid.dim == 1 && p.grid.fibers.size() == 1, ErrorKind::UnsupportedGeometry, "singular solve is planar");
  const auto& L = p.grid.fibers[0].layout;
  require(L.center == cplx(0) && L.r_min() > 0, ErrorKind::Precondition, "singular solve needs an excised grid about 0");
  require(k >= 0 && free_degree > k, ErrorKind::Contract, "need free_degree > k >= 0");
  SingularSolve out;
  double gmax = 0;
  for (auto v : p.g) gmax = std::max(gmax, std::abs(v));
  if (gmax == 0) {
    out.u.assign(p.grid.size(), 0.0);
    out.taylor.assign(k + 1, 0.0);
    return out;
  }
  double r_hol = L.r_max();
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    if (std::abs(p.g[i]) > 1e-13 * gmax) r_hol = std::min(r_hol, std::abs(p.grid.z1[i]));
  std::size_t ring = polar::nearest_ring(L, 0.6 * r_hol);
  out.ring_radius = L.radii[ring];
  require(out.ring_radius < r_hol, ErrorKind::NonIntegrable, "g does not vanish near Y");

  auto u0 = cauchy_transform(p);
  auto tau = polar::ring_coefficients(L, u0, ring, 0, k);
  std::vector<cplx> v(u0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    cplx t = 0;
    for (int j = k; j >= 0; --j) t = t * p.grid.z1[i] + tau[j];
    v[i] -= t;
  }
  WeightField w = p.weight;
  w.singular_exponent = 1 + k;
  w.center = 0;
  auto dens = w.density(p.grid);
  BasisSpec free;
  free.dim = 1;
  free.max_degree = free_degree;
  for (int j = k + 1; j <= free_degree; ++j) free.monomials.push_back(MultiIndex{{j}});
  VectorXcd c = bergman_projection(p.grid, dens, free, v);
  auto hol = evaluate(p.grid, free, c);
  out.u.resize(v.size());
  std::vector<double> fw(v.size()), fp(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.u[i] = v[i] - hol[i];
    fw[i] = std::norm(out.u[i]) * dens[i];
    fp[i] = std::norm(out.u[i]);
  }
  out.weighted_norm2 = integrate(p.grid, std::span<const double>(fw));
  out.plain_norm2 = integrate(p.grid, std::span<const double>(fp));
  // read the vanishing order on a second ring, independent of the fitting ring
  std::size_t check_ring = polar::nearest_ring(L, 0.35 * r_hol);
  if (check_ring == ring && ring > 0) --check_ring;
  out.taylor = polar::ring_coefficients(L, out.u, check_ring, 0, k);
  for (auto t : out.taylor) out.max_taylor = std::max(out.max_taylor, std::abs(t));
  out.dbar_residual = dbar_residual(p.grid, out.u, p.g);
  return out;
}

PunctureReport puncture_extension_check(const QuadGrid& grid, std::span<const cplx> u, std::span<const cplx> g) {
  require(grid.dim == 1 && grid.fibers.size() == 1, ErrorKind::UnsupportedGeometry, "puncture check is planar");
  require(u.size() == grid.size() && g.size() == grid.size(), ErrorKind::Contract, "samples not aligned");
  const auto& L = grid.fibers[0].layout;
  PunctureReport rep;
  auto du = polar::dbar(L, u);
  const int P = L.panel_count();
  const std::size_t inner_nodes = static_cast<std::size_t>(std::min(P, 3)) * L.nodes_per_panel * L.n_theta;
  for (std::size_t i = 0; i < inner_nodes; ++i) rep.residual = std::max(rep.residual, std::abs(du[i] - g[i]));
  if (L.r_min() == 0 || P < 2) return rep;
  auto density = [&](int p) {
    double m = 0;
    for (int j = 0; j < L.nodes_per_panel; ++j) {
      std::size_t ir = static_cast<std::size_t>(p) * L.nodes_per_panel + j;
      for (int it = 0; it < L.n_theta; ++it) m += std::norm(u[ir * L.n_theta + it]) * L.area_weight(ir);
    }
    return m / std::log(L.breaks[p + 1] / L.breaks[p]);
  };
  double d0 = density(0), dref = density(std::min(3, P - 1));
  rep.mass_ratio = dref > 0 ? d0 / dref : (d0 > 0 ? INFINITY : 0.0);
  rep.extends = rep.mass_ratio < 0.25;
  return rep;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson cvec(std::span<const cplx> v) {
  ojson a = ojson::array();
  for (auto x : v) a.push_back({x.real(), x.imag()});
  return a;
}

std::vector<cplx> cvec_from(const nlohmann::json& a) {
  std::vector<cplx> v;
  for (const auto& x : a) v.emplace_back(x.at(0).get<double>(), x.at(1).get<double>());
  return v;
}

const char* kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::Disc: return "disc";
    case DomainKind::Annulus: return "annulus";
    case DomainKind::Ball2: return "ball2";
    case DomainKind::Polydisc: return "polydisc";
  }
  return "?";
}

DomainKind kind_from(const std::string& s) {
  if (s == "disc") return DomainKind::Disc;
  if (s == "annulus") return DomainKind::Annulus;
  if (s == "ball2") return DomainKind::Ball2;
  if (s == "polydisc") return DomainKind::Polydisc;
  throw Error(ErrorKind::Schema, "unknown domain kind " + s);
}

template <class F>
auto parse_or_schema(const std::string& text, F body) {
  try {
    return body(nlohmann::json::parse(text));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::Schema, e.what());
  }
}

}  // namespace

std::string problem_to_json(const DbarProblem& p) {
  p.validate();
  ojson j;
  const auto& d = p.domain;
  j["domain"] = {{"kind", kind_name(d.kind)},
                 {"center", cvec(d.center)},
                 {"radius", d.radius},
                 {"r_in", d.r_in},
                 {"r_out", d.r_out},
                 {"radii", {d.radii[0], d.radii[1]}}};
  j["resolution"] = p.resolution;
  j["excision"] = p.excision;
  j["layout"] = {{"grading", p.layout.grading}, {"panel_nodes", p.layout.panel_nodes},
                 {"extra_breaks", p.layout.extra_breaks}};
  j["weight"] = {{"phi", p.weight.phi},
                 {"singular_exponent", p.weight.singular_exponent},
                 {"log_factor", p.weight.log_factor},
                 {"s_scale", p.weight.s_scale},
                 {"center", {p.weight.center.real(), p.weight.center.imag()}}};
  j["g"] = cvec(p.g);
  return j.dump(2);
}

DbarProblem problem_from_json(const std::string& text) {
  return parse_or_schema(text, [](const nlohmann::json& j) {
    const auto& jd = j.at("domain");
    ModelDomain d;
    d.kind = kind_from(jd.at("kind").get<std::string>());
    auto c = cvec_from(jd.at("center"));
    require(c.size() == 2, ErrorKind::Schema, "domain center needs two entries");
    d.center = {c[0], c[1]};
    d.radius = jd.at("radius").get<double>();
    d.r_in = jd.at("r_in").get<double>();
    d.r_out = jd.at("r_out").get<double>();
    d.radii = {jd.at("radii").at(0).get<double>(), jd.at("radii").at(1).get<double>()};
    d.ambient_dim = (d.kind == DomainKind::Ball2 || d.kind == DomainKind::Polydisc) ? 2 : 1;
    LayoutOptions lo;
    lo.grading = j.at("layout").at("grading").get<double>();
    lo.panel_nodes = j.at("layout").at("panel_nodes").get<int>();
    lo.extra_breaks = j.at("layout").at("extra_breaks").get<std::vector<double>>();
    auto p = DbarProblem::make(d, j.at("resolution").get<std::vector<int>>(), j.at("excision").get<double>(), lo);
    const auto& w = j.at("weight");
    p.weight.phi = w.at("phi").get<std::vector<double>>();
    p.weight.singular_exponent = w.at("singular_exponent").get<double>();
    p.weight.log_factor = w.at("log_factor").get<bool>();
    p.weight.s_scale = w.at("s_scale").get<double>();
    p.weight.center = {w.at("center").at(0).get<double>(), w.at("center").at(1).get<double>()};
    p.g = cvec_from(j.at("g"));
    require(p.g.size() == p.grid.size(), ErrorKind::Schema, "g does not match the grid");
    p.validate();
    return p;
  });
}

std::string solution_to_json(const DbarSolution& s) {
  ojson j;
  j["u"] = cvec(s.u);
  j["norm2"] = s.norm2;
  j["orthogonality_residual"] = s.orthogonality_residual;
  j["dbar_residual"] = s.dbar_residual;
  return j.dump(2);
}

DbarSolution solution_from_json(const std::string& text) {
  return parse_or_schema(text, [](const nlohmann::json& j) {
    DbarSolution s;
    s.u = cvec_from(j.at("u"));
    s.norm2 = j.at("norm2").get<double>();
    s.orthogonality_residual = j.at("orthogonality_residual").get<double>();
    s.dbar_residual = j.at("dbar_residual").get<double>();
    return s;
  });
}

}  // namespace jetex
