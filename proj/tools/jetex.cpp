// jetex: command-line driver for the extension experiments.
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jetex/bump.hpp"
#include "jetex/dbar.hpp"
#include "jetex/error.hpp"
#include "jetex/geom.hpp"
#include "jetex/pipeline.hpp"
#include "jetex/report.hpp"
#include "jetex/suites.hpp"

using namespace jetex;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    report::write_file(path, text);
}

// "re,im;re,im;..." or "re;re;..."
std::vector<cplx> parse_jet(const std::string& text) {
  std::vector<cplx> out;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    std::stringstream one(item);
    std::string re, im;
    std::getline(one, re, ',');
    std::getline(one, im, ',');
    try {
      std::size_t used = 0;
      double a = std::stod(re, &used);
      require(used == re.size(), ErrorKind::Schema, "bad jet entry " + item);
      double b = 0;
      if (!im.empty()) {
        b = std::stod(im, &used);
        require(used == im.size(), ErrorKind::Schema, "bad jet entry " + item);
      }
      out.emplace_back(a, b);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Schema, "bad jet entry " + item);
    }
  }
  return out;
}

std::vector<cplx> seeded_jet(std::uint64_t seed, int k) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<cplx> a(k + 1);
  for (auto& x : a) x = {n(rng), n(rng)};
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jet extension experiments"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a suite and emit a report");
  std::string config, out, format = "json";
  std::string suite = "all";
  std::uint64_t seed = 7;
  double excision = 1e-3;
  run->add_option("--config", config, "JSON config file");
  auto* suite_opt = run->add_option("--suite", suite, "jets|bergman|dbar|bump|pipeline|geom|all");
  auto* seed_opt = run->add_option("--seed", seed, "RNG seed");
  auto* out_opt = run->add_option("--out", out, "output path (stdout if omitted)");
  auto* format_opt = run->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  auto* exc_opt = run->add_option("--excision", excision, "radius of the hole about Y");

  // extend
  auto* extend = app.add_subcommand("extend", "extend one jet and report the construction");
  std::string setup = "A", phi = "radial:quadratic", jet_text;
  int k = 2;
  double eps = 1e-2;
  bool schedule = false;
  extend->add_option("--setup", setup, "A (point in a disc) or B (line in a polydisc)")
      ->check(CLI::IsMember({"A", "B"}));
  extend->add_option("--k", k, "jet order")->check(CLI::Range(0, 4));
  extend->add_option("--phi", phi, "zero|re_z|smoothed_re_z|radial:quadratic|radial:A");
  extend->add_option("--eps", eps, "cutoff scale");
  extend->add_option("--jet", jet_text, "coefficients re,im;re,im;... (seeded random if omitted)");
  extend->add_option("--seed", seed, "RNG seed for the jet");
  extend->add_option("--excision", excision, "radius of the hole about Y");
  extend->add_option("--out", out, "output path");
  extend->add_flag("--schedule", schedule, "also run the default eps schedule");

  // geom-suite
  auto* geom_cmd = app.add_subcommand("geom-suite", "comparison geometry checks for one model");
  std::string model = "sphere:1.0";
  double radius = 0.5;
  geom_cmd->add_option("--model", model, "flat|sphere:K|hyperbolic:K|revolution:A|perturbed:A");
  geom_cmd->add_option("--radius", radius, "ball radius");
  geom_cmd->add_option("--seed", seed, "RNG seed");
  geom_cmd->add_option("--out", out, "CSV output path");

  // bump-suite
  auto* bump_cmd = app.add_subcommand("bump-suite", "bump-function constants as CSV");
  std::size_t mc = 2'000'000;
  bump_cmd->add_option("--seed", seed, "RNG seed");
  bump_cmd->add_option("--mc", mc, "Monte Carlo samples");
  bump_cmd->add_option("--out", out, "CSV output path");

  // corollary
  auto* cor = app.add_subcommand("corollary", "point-singularity extension estimate for one jet");
  double cor_eps = 0.5;
  int resolution = 24, degree = 16;
  phi = "radial:quadratic";
  cor->add_option("--phi", phi, "weight");
  cor->add_option("--jet", jet_text, "derivative values re,im;... (seeded random if omitted)");
  cor->add_option("--k", k, "jet order when the jet is random")->check(CLI::Range(0, 4));
  cor->add_option("--eps", cor_eps, "exponent slack in (0, 1]");
  cor->add_option("--resolution", resolution, "radial nodes");
  cor->add_option("--degree", degree, "basis degree");
  cor->add_option("--seed", seed, "RNG seed");
  cor->add_option("--out", out, "JSON output path");

  // dbar-solve
  auto* dbar_cmd = app.add_subcommand("dbar-solve", "minimal dbar solution of a problem given as JSON");
  std::string in;
  int basis_degree = 10;
  bool example = false;
  dbar_cmd->add_option("--in", in, "problem JSON");
  dbar_cmd->add_option("--basis-degree", basis_degree, "holomorphic basis degree");
  dbar_cmd->add_flag("--example", example, "write an example problem instead of solving");
  dbar_cmd->add_option("--out", out, "JSON output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (*run) {
      suites::SuiteOptions opt;
      if (!config.empty()) opt = suites::options_from_json(read_file(config));
      // flags given on the command line override the config file
      if (suite_opt->count()) opt.suite = suite;
      if (seed_opt->count()) opt.seed = seed;
      if (out_opt->count()) opt.out = out;
      if (format_opt->count()) opt.format = format;
      if (exc_opt->count()) opt.excision = excision;
      auto rep = suites::run(opt);
      emit(opt.out, opt.format == "csv" ? report::to_csv(rep) : report::to_json(rep));
      std::cerr << rep.rows.size() << " rows, " << rep.failures() << " failed\n";
      for (auto& r : rep.rows)
        if (!r.pass) std::cerr << "FAIL " << r.id << " measured " << r.measured << " claimed " << r.claimed << "\n";
      return rep.all_pass() ? 0 : kExitFail;
    }
    if (*extend) {
      pipeline::ExtensionProblem p;
      p.setup = setup == "A" ? pipeline::Setup::A : pipeline::Setup::B;
      p.k = k;
      p.phi = suites::parse_phi(phi);
      p.phi_name = phi;
      p.excision = excision;
      auto jet = jet_text.empty() ? seeded_jet(seed, k) : parse_jet(jet_text);
      require(static_cast<int>(jet.size()) == k + 1, ErrorKind::Schema, "jet needs k + 1 coefficients");
      if (p.setup == pipeline::Setup::A)
        p.jet = jet;
      else
        for (auto a : jet) p.jet_polys.push_back({a});
      auto r = pipeline::run_induction(p, eps);
      std::string text = pipeline::result_to_json(p, r);
      if (schedule) {
        auto s = pipeline::run_schedule(p, pipeline::default_eps_schedule());
        nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
        j["schedule"] = {{"extrapolated_norm2", s.extrapolated_norm2},
                         {"last_change", s.last_change},
                         {"envelope", s.envelope}};
        text = j.dump(2) + "\n";
      }
      emit(out, text);
      return r.jet_residual < 1e-6 ? 0 : kExitFail;
    }
    if (*geom_cmd) {
      auto rows = geom::geom_suite(geom::RiemannianModel::parse(model), radius, seed);
      emit(out, geom::rows_csv(rows));
      bool ok = true;
      for (auto& r : rows) ok = ok && r.pass;
      return ok ? 0 : kExitFail;
    }
    if (*bump_cmd) {
      auto rows = bump::bump_suite_rows(seed, mc);
      emit(out, bump::suite_rows_csv(rows));
      bool ok = true;
      for (auto& r : rows) ok = ok && r.pass;
      return ok ? 0 : kExitFail;
    }
    if (*cor) {
      auto jet = jet_text.empty() ? seeded_jet(seed, k) : parse_jet(jet_text);
      emit(out, suites::corollary_json(ModelDomain::disc(1.0), jet, phi, cor_eps, resolution, degree));
      return 0;
    }
    if (*dbar_cmd) {
      if (example) {
        LayoutOptions lo;
        lo.extra_breaks = {0.5};
        auto p = DbarProblem::make(ModelDomain::disc(1.0), {16, 32}, 1e-2, lo);
        for (std::size_t i = 0; i < p.grid.size(); ++i) {
          double r = std::abs(p.grid.z1[i]);
          double t = r > 0.5 && r < 1 ? (r - 0.5) * (1 - r) * 16 : 0.0;
          p.g[i] = t * t * t;
        }
        emit(out, problem_to_json(p));
        return 0;
      }
      require(!in.empty(), ErrorKind::Contract, "dbar-solve needs --in or --example");
      auto p = problem_from_json(read_file(in));
      auto s = minimal_dbar_solution(p, BasisSpec::upto(1, basis_degree));
      emit(out, solution_to_json(s));
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "jetex: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "jetex: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
