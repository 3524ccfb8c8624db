#include "jetex/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "jetex/bump.hpp"
#include "jetex/dbar.hpp"
#include "jetex/error.hpp"
#include "jetex/geom.hpp"
#include "jetex/jets.hpp"
#include "jetex/parallel.hpp"
#include "jetex/pipeline.hpp"

namespace jetex::suites {

using json = nlohmann::ordered_json;
using report::Row;
using std::numbers::pi;

namespace {

constexpr double kNoClaim = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) { return json(v).dump(); }

Row at_most(std::string id, std::string anchor, double measured, double bound, double tol = 0) {
  return {std::move(id), std::move(anchor), measured, bound, tol, std::isfinite(measured) && measured <= bound + tol};
}

Row at_least(std::string id, std::string anchor, double measured, double bound, double tol = 0) {
  return {std::move(id), std::move(anchor), measured, bound, tol, std::isfinite(measured) && measured >= bound - tol};
}

Row near(std::string id, std::string anchor, double measured, double claimed, double tol) {
  return {std::move(id), std::move(anchor), measured, claimed, tol, std::abs(measured - claimed) <= tol};
}

Row flag(std::string id, std::string anchor, bool ok) {
  return {std::move(id), std::move(anchor), ok ? 1.0 : 0.0, 1.0, 0.0, ok};
}

/// Runs one named check; a library error is rethrown with the check id.
template <class F>
void check(std::vector<Row>& rows, const std::string& id, F&& body) {
  try {
    body(rows);
  } catch (const Error& e) {
    throw Error(e.kind(), "check " + id + " failed: " + e.what());
  }
}

std::vector<cplx> gaussian_coeffs(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<cplx> c(n);
  for (auto& x : c) x = {g(rng), g(rng)};
  return c;
}

std::string phi_tag(const std::string& spec) {
  std::string t = spec;
  std::replace(t.begin(), t.end(), ':', '_');
  return t;
}

// ---------------------------------------------------------------- jets

std::vector<Row> jets_rows(const SuiteOptions& opt) {
  std::vector<Row> rows;
  std::mt19937_64 rng(opt.seed);
  check(rows, "point_norm_constants", [&](auto& out) {
    const double c = 1 / (std::numbers::e * 2.0);
    auto s = SectionData::linear(1, 1, c, 1);
    auto K = point_norm_constants(1, 2, c);
    auto y = point_grid(0.0);
    std::vector<double> rho{rho_weight(s, 0)}, phi{0.0};
    for (int j = 0; j <= 2; ++j) {
      std::vector<cplx> a(3, 0.0);
      a[j] = 1.0;
      double got = l2_jet_norm(JetData::point(1, 2, a), s, rho, phi, y);
      double want = std::pow(c, -2.0 * (1 + j));
      out.push_back(near("jets.point_norm_constant_j" + std::to_string(j), "L2 jet norm of a point jet", got / want,
                         1.0, 1e-12));
      out.push_back(near("jets.point_norm_table_j" + std::to_string(j), "L2 jet norm of a point jet", K[j] / want, 1.0,
                         1e-12));
    }
  });
  check(rows, "representation_round_trip", [&](auto& out) {
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
      int r = 1 + t % 2, k = t % 4;
      auto n = multiindices_upto(r, k).size();
      auto jet = JetData::point(r, k, gaussian_coeffs(rng, n));
      auto back = to_jet(to_nabla(jet));
      for (std::size_t a = 0; a < n; ++a) worst = std::max(worst, std::abs(back.values[a][0] - jet.values[a][0]));
    }
    out.push_back(at_most("jets.derivative_taylor_round_trip", "plumbing", worst, 1e-12));
  });
  check(rows, "transversal_jet", [&](auto& out) {
    auto g = make_grid(ModelDomain::disc(1.0), {16, 32}, 0.0);
    double worst = 0;
    for (int t = 0; t < 10; ++t) {
      auto a = gaussian_coeffs(rng, 6);
      std::vector<cplx> lift(g.size());
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t m = a.size(); m-- > 0;) lift[i] = lift[i] * g.z1[i] + a[m];
      auto j = transversal_jet(g, lift, FlatSetup::PointInDisc, 3);
      for (int m = 0; m <= 3; ++m)
        worst = std::max(worst, std::abs(j.orders[m][0][0] - a[m] * factorial(m)));
    }
    out.push_back(at_most("jets.transversal_jet_of_lift", "jet of a holomorphic extension", worst, 1e-10));
  });
  check(rows, "homogeneity", [&](auto& out) {
    double worst = 0;
    auto s = SectionData::linear(1, 1, 0.4, 1);
    for (int t = 0; t < 20; ++t) {
      auto a = gaussian_coeffs(rng, 3);
      double lam = 0.5 + t * 0.1;
      auto jet = JetData::point(1, 2, a);
      for (auto& v : a) v *= lam;
      double n1 = pointwise_jet_norm(jet, s, 0.9, 0), n2 = pointwise_jet_norm(JetData::point(1, 2, a), s, 0.9, 0);
      worst = std::max(worst, std::abs(n2 / (lam * lam * n1) - 1));
    }
    out.push_back(at_most("jets.norm_homogeneity", "quadratic jet norm", worst, 1e-12));
  });
  check(rows, "json", [&](auto& out) {
    auto jet = JetData::point(2, 2, gaussian_coeffs(rng, 6));
    auto txt = jet_to_json(jet);
    out.push_back(flag("jets.json_round_trip", "plumbing", jet_to_json(jet_from_json(txt)) == txt));
  });
  return rows;
}

// ---------------------------------------------------------------- bergman

std::vector<Row> bergman_rows(const SuiteOptions& opt) {
  std::vector<Row> rows;
  std::mt19937_64 rng(opt.seed + 1);
  const int deg = opt.basis_degree;
  check(rows, "radial_taylor", [&](auto& out) {
    auto grid = make_grid(ModelDomain::disc(1.0), {opt.resolution, 2 * opt.resolution}, 0.0);
    auto basis = BasisSpec::upto(1, deg);
    std::vector<std::pair<std::string, PhiFn>> radial{{"zero", parse_phi("zero")},
                                                     {"quadratic", parse_phi("radial:quadratic")},
                                                     {"quartic", [](cplx z, cplx) {
                                                        return 2 * std::norm(z) * std::norm(z) - std::norm(z);
                                                      }}};
    for (auto& [name, phi] : radial) {
      WeightField wf;
      wf.phi = sample_phi(grid, phi);
      auto dens = wf.density(grid);
      double worst = 0;
      for (int k = 0; k <= 4; ++k) {
        auto a = gaussian_coeffs(rng, k + 1);
        auto ext = minimal_jet_extension(grid, dens, basis, point_jet_constraints(basis, JetData::point(1, k, a), 0.0));
        for (int j = 0; j <= deg; ++j) worst = std::max(worst, std::abs(ext.coeffs[j] - (j <= k ? a[j] : 0.0)));
      }
      out.push_back(at_most("bergman.radial_minimal_is_taylor_" + name,
                            "minimal extension for a radial weight is the Taylor truncation", worst, 1e-10));
    }
  });
  check(rows, "dense_oracle", [&](auto& out) {
    auto grid = make_grid(ModelDomain::disc(1.0), {opt.resolution, 2 * opt.resolution}, 0.0);
    auto basis = BasisSpec::upto(1, deg);
    WeightField wf;
    wf.phi = sample_phi(grid, parse_phi("re_z"));
    auto dens = wf.density(grid);
    double worst = 0, nonconst = 0;
    for (int k = 0; k <= 2; ++k) {
      std::vector<cplx> a = k == 0 ? std::vector<cplx>{1.0} : gaussian_coeffs(rng, k + 1);
      auto cons = point_jet_constraints(basis, JetData::point(1, k, a), 0.0);
      auto x = minimal_jet_extension(grid, dens, basis, cons);
      auto y = minimal_jet_extension_dense(grid, dens, basis, cons);
      worst = std::max(worst, (x.coeffs - y.coeffs).norm());
      if (k == 0) nonconst = std::abs(x.coeffs[1]);
    }
    out.push_back(at_most("bergman.re_z_matches_dense_oracle", "minimal extension for a non-radial weight", worst, 1e-8));
    out.push_back(at_least("bergman.re_z_extension_not_constant", "minimal extension for a non-radial weight", nonconst,
                           1e-3));
  });
  check(rows, "corollary", [&](auto& out) {
    auto disc = ModelDomain::disc(1.0);
    const double eps = 0.5;
    for (const char* name : {"zero", "radial:quadratic", "smoothed_re_z"}) {
      auto phi = parse_phi(name);
      for (int k = 0; k <= 2; ++k) {
        double worst = 0, cstar = 0;
        for (std::size_t t = 0; t < opt.corollary_jets; ++t) {
          auto rep = verify_corollary_bound(disc, gaussian_coeffs(rng, k + 1), phi, eps, opt.resolution, deg);
          cstar = rep.c_star;
          worst = std::max(worst, rep.ratio / rep.c_star);
        }
        auto fine = verify_corollary_bound(disc, std::vector<cplx>(k + 1, 1.0), phi, eps, 2 * opt.resolution, deg);
        std::string tag = phi_tag(name) + "_k" + std::to_string(k);
        const char* anchor = "extension estimate with a point singularity of order n - eps";
        out.push_back(at_most("bergman.corollary_batch_ratio_" + tag, anchor, worst, 1.0, 1e-9));
        Row c{"bergman.corollary_constant_" + tag, anchor, cstar, kNoClaim, 0, std::isfinite(cstar) && cstar > 0};
        out.push_back(c);
        double drift = std::max(fine.c_star / cstar, cstar / fine.c_star);
        out.push_back(at_most("bergman.corollary_refinement_" + tag, anchor, drift, 1.2));
      }
    }
  });
  check(rows, "parseval", [&](auto& out) {
    double worst = 0;
    for (int t = 0; t < 10; ++t) worst = std::max(worst, parseval_check(gaussian_coeffs(rng, 9), 0.3 + 0.1 * t).residual);
    out.push_back(at_most("bergman.parseval_identity", "plumbing", worst, 1e-9));
  });
  return rows;
}

// ---------------------------------------------------------------- dbar

double annular_bump(double r) {
  if (r <= 0.5 || r >= 1) return 0;
  double t = (r - 0.5) * (1 - r) * 16;
  return t * t * t;
}

std::vector<Row> dbar_rows(const SuiteOptions& opt) {
  std::vector<Row> rows;
  std::mt19937_64 rng(opt.seed + 2);
  const int nr = opt.resolution;
  check(rows, "cauchy_constant", [&](auto& out) {
    auto p = DbarProblem::make(ModelDomain::disc(1.0), {nr, 2 * nr}, 0.0);
    std::fill(p.g.begin(), p.g.end(), cplx(1));
    auto u = cauchy_transform(p);
    double worst = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (std::abs(p.grid.z1[i]) < 0.95) worst = std::max(worst, std::abs(u[i] - std::conj(p.grid.z1[i])));
    out.push_back(at_most("dbar.cauchy_transform_of_one", "Cauchy transform solves dbar", worst, 1e-6));
  });
  check(rows, "seeded_cases", [&](auto& out) {
    std::uniform_real_distribution<double> u(-1, 1), pos(0.5, 2);
    auto basis = BasisSpec::upto(1, 10);
    double orth = 0, ratio = 0, resid = 0;
    for (std::size_t t = 0; t < opt.dbar_cases; ++t) {
      auto p = DbarProblem::make(ModelDomain::disc(1.0), {nr, 2 * nr}, 0.0);
      double a = pos(rng);
      cplx b(u(rng), u(rng));
      // harmonic part leaves the curvature factor constant
      p.weight.phi = sample_phi(p.grid, [&](cplx z, cplx) { return a * std::norm(z) + std::real(b * z * z); });
      auto c = gaussian_coeffs(rng, 6);
      for (std::size_t i = 0; i < p.grid.size(); ++i) {
        cplx z = p.grid.z1[i], zb = std::conj(z);
        p.g[i] = c[0] + c[1] * z + c[2] * zb + c[3] * z * zb + c[4] * zb * zb + c[5] * z * z;
      }
      auto sol = minimal_dbar_solution(p, basis);
      orth = std::max(orth, sol.orthogonality_residual);
      resid = std::max(resid, sol.dbar_residual);
      auto h = hormander_estimate_check(p, pos(rng), pos(rng), curvature_from_phi(p.grid, p.weight.phi), basis);
      ratio = std::max(ratio, h.ratio);
    }
    out.push_back(at_most("dbar.orthogonality_residual", "minimal solution is orthogonal to holomorphic functions", orth,
                          1e-8));
    out.push_back(at_most("dbar.solution_residual", "minimal solution solves dbar", resid, 1e-8));
    out.push_back(at_most("dbar.hormander_ratio", "L2 estimate for dbar under positive curvature", ratio, 1.0));
  });
  check(rows, "singular_weight", [&](auto& out) {
    LayoutOptions lo;
    lo.extra_breaks = {0.5};
    auto p = DbarProblem::make(ModelDomain::disc(1.0), {nr, 2 * nr}, opt.excision, lo);
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      cplx z = p.grid.z1[i];
      p.g[i] = annular_bump(std::abs(z)) * (1.0 + z * 0.5 + z * z * z + 0.3 * std::conj(z));
    }
    for (int k = 0; k <= 2; ++k) {
      auto s = singular_weight_solve(p, k);
      std::string tag = "_k" + std::to_string(k);
      out.push_back(at_most("dbar.singular_weight_vanishing" + tag, "singular weight forces vanishing to order k",
                            s.max_taylor, 1e-6));
      Row w{"dbar.singular_weight_norm" + tag, "singular weight forces vanishing to order k", s.weighted_norm2, kNoClaim,
            0, std::isfinite(s.weighted_norm2)};
      out.push_back(w);
      if (k == 1) {
        auto pc = puncture_extension_check(p.grid, s.u, p.g);
        out.push_back(flag("dbar.puncture_removable", "dbar extends across a thin set", pc.extends));
      }
    }
  });
  check(rows, "json", [&](auto& out) {
    auto p = DbarProblem::make(ModelDomain::disc(1.0), {12, 24}, 1e-2);
    for (std::size_t i = 0; i < p.grid.size(); ++i) p.g[i] = annular_bump(std::abs(p.grid.z1[i]));
    auto txt = problem_to_json(p);
    auto s = minimal_dbar_solution(p, BasisSpec::upto(1, 6));
    auto st = solution_to_json(s);
    bool ok = problem_to_json(problem_from_json(txt)) == txt && solution_to_json(solution_from_json(st)) == st;
    out.push_back(flag("dbar.json_round_trip", "plumbing", ok));
  });
  return rows;
}

// ---------------------------------------------------------------- bump

std::string bump_anchor(const std::string& name) {
  if (name.rfind("chi0", 0) == 0 || name.rfind("eta", 0) == 0 || name.rfind("lambda", 0) == 0 ||
      name.rfind("sum", 0) == 0 || name.rfind("scalar", 0) == 0)
    return "scalar estimates for the convex bump profile";
  if (name.rfind("lagrange", 0) == 0) return "Lagrange inequality for the curvature term";
  if (name.rfind("ddbar", 0) == 0 || name.rfind("b_epsilon", 0) == 0) return "curvature lower bound of the modified weight";
  if (name.rfind("theta", 0) == 0 || name.rfind("c_rk", 0) == 0) return "cutoff integral constant";
  if (name.rfind("taylor", 0) == 0) return "decay of the truncated jet near Y";
  return "plumbing";
}

std::vector<Row> bump_rows(const SuiteOptions& opt) {
  std::vector<Row> rows;
  check(rows, "bump_suite", [&](auto& out) {
    for (auto& r : bump::bump_suite_rows(opt.seed + 3, opt.mc_samples))
      out.push_back({"bump." + r.name, bump_anchor(r.name), r.measured_constant, r.paper_claim, 0, r.pass});
  });
  return rows;
}

// ---------------------------------------------------------------- pipeline

std::vector<Row> pipeline_rows(const SuiteOptions& opt) {
  using namespace pipeline;
  std::vector<Row> rows;
  std::mt19937_64 rng(opt.seed + 4);
  auto base = [&](int k) {
    ExtensionProblem p;
    p.k = k;
    p.jet.assign(k + 1, 0.0);
    p.phi = parse_phi(opt.phi);
    p.phi_name = opt.phi;
    p.excision = opt.excision;
    return p;
  };
  double prev = 0;
  for (int k = 0; k <= opt.pipeline_k; ++k) {
    std::string tag = "_k" + std::to_string(k);
    check(rows, "induction" + tag, [&](auto& out) {
      std::vector<std::vector<cplx>> jets;
      for (std::size_t t = 0; t < opt.pipeline_jets; ++t) jets.push_back(gaussian_coeffs(rng, k + 1));
      std::vector<ExtensionResult> res(jets.size());
      parallel_for(jets.size(), [&](std::size_t t) {
        auto p = base(k);
        p.jet = jets[t];
        res[t] = run_induction(p, opt.pipeline_eps);
      });
      double jet = 0, taylor = 0, holo = 0;
      bool finite = true;
      for (auto& r : res) {
        jet = std::max(jet, r.jet_residual);
        for (auto& l : r.levels) {
          taylor = std::max(taylor, l.u_taylor);
          holo = std::max(holo, l.holomorphy);
        }
        finite = finite && std::isfinite(r.weighted_norm2) && r.weighted_norm2 > 0;
      }
      out.push_back(at_most("pipeline.jet_residual" + tag, "extension has the prescribed jet", jet, 1e-6));
      out.push_back(at_most("pipeline.correction_vanishing" + tag, "corrections vanish to order k on Y", taylor, 1e-6));
      out.push_back(at_most("pipeline.holomorphy" + tag, "extension is holomorphic", holo, 1e-8));
      out.push_back(flag("pipeline.weighted_norm_finite" + tag, "weighted L2 estimate of the extension", finite));
    });
    check(rows, "constant" + tag, [&](auto& out) {
      auto c = measure_constant(base(k), opt.pipeline_jets, opt.seed + 10 + k, opt.pipeline_eps);
      const char* anchor = "extension constant independent of the jet";
      out.push_back(at_most("pipeline.constant_operator_over_batch" + tag, anchor, c.operator_sup / c.sup, 2.0));
      if (k == 0)
        out.push_back(at_most("pipeline.constant_spread" + tag, anchor, c.spread, 2.0));
      else
        out.push_back({"pipeline.constant_spread" + tag, anchor, c.spread, kNoClaim, 0, std::isfinite(c.spread)});
      out.push_back({"pipeline.constant" + tag, anchor, c.operator_sup, kNoClaim, 0, std::isfinite(c.operator_sup)});
      if (k > 0)
        out.push_back(at_least("pipeline.constant_nondecreasing" + tag, "constant grows with the jet order",
                               c.operator_sup / prev, 1.0, 1e-9));
      prev = c.operator_sup;
    });
  }
  check(rows, "schedule", [&](auto& out) {
    auto p = base(std::min(1, opt.pipeline_k));
    p.jet = gaussian_coeffs(rng, p.k + 1);
    auto s = run_schedule(p, default_eps_schedule());
    out.push_back(at_most("pipeline.eps_schedule_change", "norm converges as eps decreases", s.last_change, s.envelope));
  });
  check(rows, "weight_sweep", [&](auto& out) {
    for (double A : {0.0, 1.0, 4.0}) {
      auto p = base(std::min(1, opt.pipeline_k));
      p.phi = [A](cplx z, cplx) { return A * std::norm(z); };
      auto c = measure_constant(p, 4, opt.seed + 20, opt.pipeline_eps);
      out.push_back({"pipeline.constant_weight_A" + std::to_string(static_cast<int>(A)), "dependence of the constant on the curvature of the weight",
                     c.operator_sup, kNoClaim, 0, std::isfinite(c.operator_sup)});
    }
  });
  check(rows, "setup_b", [&](auto& out) {
    ExtensionProblem p;
    p.setup = Setup::B;
    p.k = 1;
    p.excision = opt.excision;
    p.jet_polys = {{1.0, 0.5}, {0.0, 0.0, cplx(0, 1)}};
    p.phi = [](cplx z1, cplx z2) { return std::norm(z1) + std::norm(z2); };
    auto r = run_induction(p, 3e-2);
    out.push_back(at_most("pipeline.setup_b_jet_residual", "extension has the prescribed jet", r.jet_residual, 1e-6));
    out.push_back(at_most("pipeline.setup_b_holomorphy_in_y", "extension is holomorphic", r.z2_holomorphy, 1e-8));
  });
  return rows;
}

// ---------------------------------------------------------------- geom

std::string geom_anchor(const std::string& name) {
  if (name.rfind("gronwall", 0) == 0) return "Gronwall comparison for the Jacobi equation";
  if (name.rfind("rauch", 0) == 0 || name.rfind("gauss", 0) == 0) return "Rauch comparison for the exponential map";
  if (name.rfind("curvature_radius", 0) == 0 || name.rfind("admissible", 0) == 0)
    return "curvature radius and normal coordinates";
  if (name.rfind("metric_equivalence", 0) == 0) return "metric equivalence in normal coordinates";
  if (name.rfind("inversion", 0) == 0) return "quantitative inverse function theorem";
  if (name.rfind("poincare", 0) == 0) return "Poincare lemma with bounds";
  return "plumbing";
}

std::vector<Row> geom_rows(const SuiteOptions& opt) {
  std::vector<Row> rows;
  check(rows, "geom_suite", [&](auto& out) {
    std::vector<geom::GeomRow> g = geom::gronwall_suite(opt.gronwall_cases, opt.seed + 5);
    for (const char* spec : {"sphere:1.0", "hyperbolic:1.0", "flat"}) {
      auto r = geom::rauch_suite(geom::RiemannianModel::parse(spec), opt.geom_radius, opt.rauch_samples, opt.seed + 6);
      g.insert(g.end(), r.begin(), r.end());
    }
    if (opt.geom_model != "sphere:1.0" && opt.geom_model != "hyperbolic:1.0" && opt.geom_model != "flat") {
      auto r = geom::rauch_suite(geom::RiemannianModel::parse(opt.geom_model), opt.geom_radius, opt.rauch_samples,
                                 opt.seed + 6);
      g.insert(g.end(), r.begin(), r.end());
    }
    auto extra = geom::auxiliary_suite(opt.seed + 7);
    g.insert(g.end(), extra.begin(), extra.end());
    for (auto& r : g) out.push_back({"geom." + r.name, geom_anchor(r.name), r.measured, r.bound, r.tolerance, r.pass});
  });
  return rows;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> SuiteOptions::settings() const {
  return {{"suite", suite},
          {"seed", std::to_string(seed)},
          {"excision", fmt(excision)},
          {"geom_model", geom_model},
          {"geom_radius", fmt(geom_radius)},
          {"gronwall_cases", std::to_string(gronwall_cases)},
          {"rauch_samples", std::to_string(rauch_samples)},
          {"mc_samples", std::to_string(mc_samples)},
          {"basis_degree", std::to_string(basis_degree)},
          {"resolution", std::to_string(resolution)},
          {"corollary_jets", std::to_string(corollary_jets)},
          {"dbar_cases", std::to_string(dbar_cases)},
          {"pipeline_k", std::to_string(pipeline_k)},
          {"pipeline_jets", std::to_string(pipeline_jets)},
          {"pipeline_eps", fmt(pipeline_eps)},
          {"phi", phi}};
}

namespace {

template <class T>
void take(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Schema, std::string("wrong type for config key ") + key);
  }
}

void validate(const SuiteOptions& o) {
  auto& names = suite_names();
  require(o.suite == "all" || std::find(names.begin(), names.end(), o.suite) != names.end(), ErrorKind::Schema,
          "unknown suite " + o.suite);
  require(o.excision > 0 && o.excision < 0.1, ErrorKind::Schema, "excision must lie in (0, 0.1)");
  require(o.geom_radius > 0, ErrorKind::Schema, "geom_radius must be positive");
  require(o.gronwall_cases > 0 && o.rauch_samples > 0 && o.mc_samples >= 1000, ErrorKind::Schema,
          "sample counts too small");
  require(o.basis_degree >= 4 && o.basis_degree <= 24 && o.resolution >= 8, ErrorKind::Schema,
          "basis_degree must lie in [4, 24] and resolution >= 8");
  require(o.corollary_jets > 0 && o.dbar_cases > 0 && o.pipeline_jets > 0, ErrorKind::Schema, "empty batch");
  require(o.pipeline_k >= 0 && o.pipeline_k <= 4, ErrorKind::Schema, "pipeline_k must lie in [0, 4]");
  require(o.pipeline_eps > 0 && o.pipeline_eps < 1 / std::numbers::e, ErrorKind::Schema,
          "pipeline_eps must lie in (0, 1/e)");
  require(o.format == "json" || o.format == "csv", ErrorKind::Schema, "format must be json or csv");
  parse_phi(o.phi);
  geom::RiemannianModel::parse(o.geom_model);
}

}  // namespace

SuiteOptions options_from_json(const std::string& text, SuiteOptions base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("config is not JSON: ") + e.what());
  }
  require(j.is_object(), ErrorKind::Schema, "config must be a JSON object");
  static const std::vector<std::string> known{
      "suite",       "seed",           "excision",      "geom_model", "geom_radius",  "gronwall_cases",
      "rauch_samples", "mc_samples",   "basis_degree",  "resolution", "corollary_jets", "dbar_cases",
      "pipeline_k",  "pipeline_jets",  "pipeline_eps",  "phi",        "out",          "format"};
  for (auto& [k, v] : j.items())
    require(std::find(known.begin(), known.end(), k) != known.end(), ErrorKind::Schema, "unknown config key " + k);
  require(j.contains("seed"), ErrorKind::Schema, "config needs a seed");
  take(j, "suite", base.suite);
  take(j, "seed", base.seed);
  take(j, "excision", base.excision);
  take(j, "geom_model", base.geom_model);
  take(j, "geom_radius", base.geom_radius);
  take(j, "gronwall_cases", base.gronwall_cases);
  take(j, "rauch_samples", base.rauch_samples);
  take(j, "mc_samples", base.mc_samples);
  take(j, "basis_degree", base.basis_degree);
  take(j, "resolution", base.resolution);
  take(j, "corollary_jets", base.corollary_jets);
  take(j, "dbar_cases", base.dbar_cases);
  take(j, "pipeline_k", base.pipeline_k);
  take(j, "pipeline_jets", base.pipeline_jets);
  take(j, "pipeline_eps", base.pipeline_eps);
  take(j, "phi", base.phi);
  take(j, "out", base.out);
  take(j, "format", base.format);
  validate(base);
  return base;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"jets", "bergman", "dbar", "bump", "pipeline", "geom"};
  return names;
}

PhiFn parse_phi(const std::string& spec) {
  if (spec == "zero") return [](cplx, cplx) { return 0.0; };
  if (spec == "re_z") return [](cplx z, cplx) { return z.real(); };
  // softplus: a smooth, convex stand-in for max(Re z, 0)
  if (spec == "smoothed_re_z") return [](cplx z, cplx) { return std::log1p(std::exp(z.real())); };
  if (spec == "radial:quadratic") return [](cplx z1, cplx z2) { return std::norm(z1) + std::norm(z2); };
  if (spec.rfind("radial:", 0) == 0) {
    double A = 0;
    std::istringstream is(spec.substr(7));
    is >> A;
    require(!is.fail() && is.eof() && std::isfinite(A), ErrorKind::Schema, "bad weight " + spec);
    return [A](cplx z1, cplx z2) { return A * (std::norm(z1) + std::norm(z2)); };
  }
  throw Error(ErrorKind::Schema, "unknown weight " + spec);
}

std::vector<Row> run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "jets") return jets_rows(opt);
  if (name == "bergman") return bergman_rows(opt);
  if (name == "dbar") return dbar_rows(opt);
  if (name == "bump") return bump_rows(opt);
  if (name == "pipeline") return pipeline_rows(opt);
  if (name == "geom") return geom_rows(opt);
  throw Error(ErrorKind::Schema, "unknown suite " + name);
}

report::Report run(const SuiteOptions& opt) {
  validate(opt);
  report::Report r;
  r.env = report::current_environment(opt.suite, opt.seed);
  r.env.settings = opt.settings();
  // suites run one after another; each parallelizes internally
  for (auto& name : suite_names())
    if (opt.suite == "all" || opt.suite == name) {
      auto rows = run_suite(name, opt);
      r.rows.insert(r.rows.end(), rows.begin(), rows.end());
    }
  return r;
}

std::string corollary_json(const ModelDomain& disc, const std::vector<cplx>& derivs, const std::string& phi,
                           double eps, int resolution, int basis_degree) {
  auto rep = verify_corollary_bound(disc, derivs, parse_phi(phi), eps, resolution, basis_degree);
  json j;
  j["lhs"] = rep.lhs;
  j["rhs"] = rep.rhs_frame;
  j["ratio"] = rep.ratio;
  j["basis_degree"] = rep.basis_degree;
  j["grid_resolution"] = rep.grid_resolution;
  j["excision"] = 0.0;
  j["c_star"] = rep.c_star;
  j["phi"] = phi;
  j["eps"] = eps;
  return j.dump(2) + "\n";
}

}  // namespace jetex::suites
