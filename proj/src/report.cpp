#include "jetex/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "jetex/error.hpp"
#include "jetex/parallel.hpp"
#include "jetex/simd.hpp"

namespace jetex::report {

using json = nlohmann::ordered_json;

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
}

std::size_t Report::failures() const {
  return std::count_if(rows.begin(), rows.end(), [](const Row& r) { return !r.pass; });
}

Environment current_environment(const std::string& suite, std::uint64_t seed) {
  Environment e;
  e.suite = suite;
  e.seed = seed;
  e.threads = thread_count();
  e.simd = std::string(simd::backend_name(simd::active_backend()));
#if defined(__clang__)
  e.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  e.compiler = "gcc " __VERSION__;
#else
  e.compiler = "unknown";
#endif
#ifdef NDEBUG
  e.build_type = "release";
#else
  e.build_type = "debug";
#endif
  return e;
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j, const char* key) {
  require(j.contains(key), ErrorKind::Schema, std::string("missing field ") + key);
  const auto& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  require(v.is_number(), ErrorKind::Schema, std::string("field is not a number: ") + key);
  return v.get<double>();
}

template <class T>
T read(const json& j, const char* key) {
  require(j.contains(key), ErrorKind::Schema, std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorKind::Schema, std::string("wrong type for field ") + key);
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  return json(v).dump();
}

}  // namespace

std::string to_json(const Report& r) {
  json env;
  env["suite"] = r.env.suite;
  env["seed"] = r.env.seed;
  env["threads"] = r.env.threads;
  env["simd"] = r.env.simd;
  env["compiler"] = r.env.compiler;
  env["build_type"] = r.env.build_type;
  json settings = json::object();
  for (auto& [k, v] : r.env.settings) settings[k] = v;
  env["settings"] = settings;
  json rows = json::array();
  for (auto& row : r.rows) {
    json j;
    j["id"] = row.id;
    j["paper_anchor"] = row.anchor;
    j["measured"] = number(row.measured);
    j["claimed"] = number(row.claimed);
    j["pass"] = row.pass;
    j["tolerance"] = number(row.tolerance);
    rows.push_back(j);
  }
  json out;
  out["environment"] = env;
  out["rows"] = rows;
  out["all_pass"] = r.all_pass();
  return out.dump(2) + "\n";
}

Report from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("report is not JSON: ") + e.what());
  }
  require(j.is_object() && j.contains("environment") && j.contains("rows") && j.at("rows").is_array(),
          ErrorKind::Schema, "report needs environment and rows");
  Report r;
  const auto& e = j.at("environment");
  r.env.suite = read<std::string>(e, "suite");
  r.env.seed = read<std::uint64_t>(e, "seed");
  r.env.threads = read<unsigned>(e, "threads");
  r.env.simd = read<std::string>(e, "simd");
  r.env.compiler = read<std::string>(e, "compiler");
  r.env.build_type = read<std::string>(e, "build_type");
  require(e.contains("settings") && e.at("settings").is_object(), ErrorKind::Schema, "settings must be an object");
  for (auto& [k, v] : e.at("settings").items()) {
    require(v.is_string(), ErrorKind::Schema, "setting values are strings");
    r.env.settings.emplace_back(k, v.get<std::string>());
  }
  for (const auto& row : j.at("rows")) {
    Row x;
    x.id = read<std::string>(row, "id");
    x.anchor = read<std::string>(row, "paper_anchor");
    x.measured = read_number(row, "measured");
    x.claimed = read_number(row, "claimed");
    x.pass = read<bool>(row, "pass");
    x.tolerance = read_number(row, "tolerance");
    require(!x.anchor.empty(), ErrorKind::Schema, "row without an anchor: " + x.id);
    r.rows.push_back(std::move(x));
  }
  return r;
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "suite,id,paper_anchor,measured,claimed,tolerance,pass\n";
  for (auto& row : r.rows) {
    auto dot = row.id.find('.');
    std::string suite = dot == std::string::npos ? r.env.suite : row.id.substr(0, dot);
    os << csv_field(suite) << ',' << csv_field(row.id) << ',' << csv_field(row.anchor) << ','
       << csv_number(row.measured) << ',' << csv_number(row.claimed) << ',' << csv_number(row.tolerance) << ','
       << (row.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + tmp.string());
    out << text;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "write failed for " + path);
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot move output into place: " + path);
  }
}

}  // namespace jetex::report
