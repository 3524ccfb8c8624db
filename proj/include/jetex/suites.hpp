#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jetex/bergman.hpp"
#include "jetex/report.hpp"

namespace jetex::suites {

/// Everything a suite run depends on. Defaults reproduce the acceptance settings.
struct SuiteOptions {
  std::string suite = "all";
  std::uint64_t seed = 7;
  double excision = 1e-3;
  // geom
  std::string geom_model = "sphere:1.0";
  double geom_radius = 0.5;
  std::size_t gronwall_cases = 1000;
  std::size_t rauch_samples = 1000;
  // bump
  std::size_t mc_samples = 2'000'000;
  // bergman and corollary
  int basis_degree = 16;
  int resolution = 24;
  std::size_t corollary_jets = 10;
  // dbar
  std::size_t dbar_cases = 20;
  // pipeline
  int pipeline_k = 2;
  std::size_t pipeline_jets = 10;
  double pipeline_eps = 1e-2;
  std::string phi = "radial:quadratic";
  // output
  std::string out;
  std::string format = "json";

  /// Resolved values as strings, in a fixed order, for report metadata.
  std::vector<std::pair<std::string, std::string>> settings() const;
};

/// Reads a JSON config over the given defaults. Unknown keys, wrong types and
/// a missing "seed" raise Schema.
SuiteOptions options_from_json(const std::string& text, SuiteOptions base = {});

const std::vector<std::string>& suite_names();  // without "all"

/// Weight by name: zero, radial:quadratic, radial:A (A |z|^2), re_z, smoothed_re_z.
PhiFn parse_phi(const std::string& spec);

/// Rows of one suite, ids prefixed with the suite name. A failing precondition
/// aborts the suite with an Error naming the check.
std::vector<report::Row> run_suite(const std::string& name, const SuiteOptions& opt);
/// Runs opt.suite ("all" runs every suite in suite_names order).
report::Report run(const SuiteOptions& opt);

/// Bergman corollary report for one jet: lhs, rhs, ratio, basis_degree, grid_resolution, excision.
std::string corollary_json(const ModelDomain& disc, const std::vector<cplx>& derivs, const std::string& phi,
                           double eps, int resolution, int basis_degree);

}  // namespace jetex::suites
