#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "jetex/dbar.hpp"
#include "jetex/error.hpp"
#include "jetex/report.hpp"
#include "jetex/suites.hpp"

using namespace jetex;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "jetex_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

int cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " JETEX_CLI_PATH " " + args + " 2>" + path("stderr.txt");
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void put(const std::string& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("run is deterministic and round-trips") {
  CHECK(cli("run --suite jets --seed 3 --out " + path("a.json")) == 0);
  CHECK(cli("run --suite jets --seed 3 --out " + path("b.json")) == 0);
  auto a = slurp(path("a.json"));
  CHECK(!a.empty());
  CHECK(a == slurp(path("b.json")));
  auto rep = report::from_json(a);
  CHECK(report::to_json(rep) == a);
  CHECK(rep.env.seed == 3);
  CHECK(rep.all_pass());
  for (auto& r : rep.rows) CHECK(!r.anchor.empty());
  CHECK(cli("run --suite jets --seed 3 --format csv --out " + path("a.csv")) == 0);
  auto csv = slurp(path("a.csv"));
  CHECK(lines(csv) == rep.rows.size() + 1);
  CHECK(csv.rfind("suite,id,paper_anchor,measured,claimed,tolerance,pass\n", 0) == 0);
  // anchors appear verbatim
  for (auto& r : rep.rows) CHECK(csv.find(r.anchor) != std::string::npos);
}

TEST_CASE("thread count does not change the rows") {
  CHECK(cli("run --suite dbar --seed 5 --out " + path("t1.json"), "JETEX_THREADS=1") == 0);
  CHECK(cli("run --suite dbar --seed 5 --out " + path("t4.json"), "JETEX_THREADS=4") == 0);
  auto a = nlohmann::json::parse(slurp(path("t1.json")));
  auto b = nlohmann::json::parse(slurp(path("t4.json")));
  CHECK(a["rows"] == b["rows"]);
  CHECK(a["environment"]["threads"] == 1);
}

TEST_CASE("config files") {
  put(path("good.json"), R"({"suite": "bergman", "seed": 11, "corollary_jets": 3, "format": "csv"})");
  CHECK(cli("run --config " + path("good.json") + " --out " + path("good.csv")) == 0);
  CHECK(slurp(path("good.csv")).find("bergman.corollary_constant_zero_k0") != std::string::npos);
  // command-line flags win over the file
  CHECK(cli("run --config " + path("good.json") + " --suite jets --format json --out " + path("over.json")) == 0);
  CHECK(report::from_json(slurp(path("over.json"))).env.suite == "jets");

  put(path("unknown.json"), R"({"seed": 1, "sweet": "jets"})");
  CHECK(cli("run --config " + path("unknown.json") + " --out " + path("never.json")) == 2);
  CHECK_FALSE(fs::exists(path("never.json")));
  put(path("noseed.json"), R"({"suite": "jets"})");
  CHECK(cli("run --config " + path("noseed.json") + " --out " + path("never.json")) == 2);
  put(path("type.json"), R"({"seed": "seven"})");
  CHECK(cli("run --config " + path("type.json") + " --out " + path("never.json")) == 2);
  put(path("broken.json"), "{");
  CHECK(cli("run --config " + path("broken.json") + " --out " + path("never.json")) == 2);
  CHECK_FALSE(fs::exists(path("never.json")));
  CHECK(cli("run --suite nope --out " + path("never.json")) == 2);
  CHECK(cli("run --suite jets --format xml") != 0);
  CHECK(cli("run --config " + path("missing.json")) == 2);
  CHECK(cli("run --suite jets --out /nonexistent/dir/x.json") == 2);
}

TEST_CASE("options parser") {
  auto o = suites::options_from_json(R"({"seed": 4, "pipeline_k": 1, "phi": "radial:4"})");
  CHECK(o.seed == 4);
  CHECK(o.pipeline_k == 1);
  CHECK(suites::parse_phi(o.phi)(cplx(0.5, 0), 0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(suites::options_from_json(R"({"seed": 4, "pipeline_eps": 0.5})"), Error);
  CHECK_THROWS_AS(suites::options_from_json(R"({"seed": 4, "phi": "cubic"})"), Error);
  CHECK_THROWS_AS(suites::options_from_json(R"({"seed": 4, "geom_model": "torus"})"), Error);
  CHECK_THROWS_AS(suites::options_from_json("[1]"), Error);
  CHECK(suites::parse_phi("smoothed_re_z")(cplx(0, 3), 0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("extend") {
  CHECK(cli("extend --setup A --k 2 --phi radial:quadratic --eps 1e-2 --out " + path("report.json")) == 0);
  auto j = nlohmann::json::parse(slurp(path("report.json")));
  CHECK(j["setup"] == "A");
  CHECK(j["k"] == 2);
  CHECK(j["levels"].size() == 3);
  CHECK(cli("extend --setup A --k 1 --jet '1,0;0,2' --eps 1e-1 --schedule --out " + path("s.json")) == 0);
  auto s = nlohmann::json::parse(slurp(path("s.json")));
  CHECK(s["coeffs"][1][1].get<double>() == doctest::Approx(2));
  CHECK(s["schedule"]["last_change"].get<double>() <= s["schedule"]["envelope"].get<double>());
  CHECK(cli("extend --setup B --k 1 --jet '1;0.5' --eps 3e-2 --out " + path("b.json")) == 0);
  CHECK(cli("extend --k 1 --jet 1 --out " + path("bad.json")) == 2);
  CHECK(cli("extend --k 1 --eps 0.5 --out " + path("bad.json")) == 2);
  CHECK_FALSE(fs::exists(path("bad.json")));
}

TEST_CASE("geom and bump subcommands") {
  CHECK(cli("geom-suite --model sphere:1.0 --radius 0.5 --out " + path("geom.csv")) == 0);
  auto g = slurp(path("geom.csv"));
  CHECK(g.rfind("name,measured,bound,tolerance,pass\n", 0) == 0);
  CHECK(g.find(",false") == std::string::npos);
  CHECK(cli("geom-suite --model hyperbolic:1.0 --radius 0.5 --out " + path("h.csv")) == 0);
  CHECK(slurp(path("h.csv")).find("rauch_saturation_hyperbolic") != std::string::npos);
  CHECK(cli("geom-suite --model torus:1 --out " + path("x.csv")) == 2);
  CHECK(cli("bump-suite --seed 2 --mc 200000 --out " + path("bump.csv")) == 0);
  auto b = slurp(path("bump.csv"));
  CHECK(b.rfind("name,measured_constant,paper_claim,pass\n", 0) == 0);
  CHECK(b.find("lambda_over_sigma2_discrepancy,4") != std::string::npos);
}

TEST_CASE("corollary and dbar subcommands") {
  CHECK(cli("corollary --phi zero --jet 1 --eps 0.5 --out " + path("cor.json")) == 0);
  auto c = nlohmann::ordered_json::parse(slurp(path("cor.json")));
  std::vector<std::string> keys;
  for (auto& [k, v] : c.items()) keys.push_back(k);
  CHECK(std::vector<std::string>(keys.begin(), keys.begin() + 6) ==
        std::vector<std::string>{"lhs", "rhs", "ratio", "basis_degree", "grid_resolution", "excision"});
  CHECK(c["lhs"].get<double>() == doctest::Approx(2 * 3.141592653589793).epsilon(1e-10));
  CHECK(cli("dbar-solve --example --out " + path("problem.json")) == 0);
  CHECK(cli("dbar-solve --in " + path("problem.json") + " --out " + path("sol.json")) == 0);
  auto sol = slurp(path("sol.json"));
  CHECK(solution_to_json(solution_from_json(sol)) == sol);
  put(path("junk.json"), "{}");
  CHECK(cli("dbar-solve --in " + path("junk.json")) == 2);
}
