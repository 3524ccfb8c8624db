#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace jetex::report {

/// One check. claimed is NaN when a row only records a measurement.
struct Row {
  std::string id;
  std::string anchor;  // what the row checks, or "plumbing"
  double measured = 0;
  double claimed = 0;
  double tolerance = 0;
  bool pass = false;
};

struct Environment {
  std::string suite;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string simd;
  std::string compiler;
  std::string build_type;
  /// Resolved configuration, in emission order.
  std::vector<std::pair<std::string, std::string>> settings;
};

struct Report {
  Environment env;
  std::vector<Row> rows;
  bool all_pass() const;
  std::size_t failures() const;
};

Environment current_environment(const std::string& suite, std::uint64_t seed);

/// Stable key order; doubles are written in shortest round-trip form.
std::string to_json(const Report& r);
/// Throws Schema on malformed input.
Report from_json(const std::string& text);
/// Long format, one line per row: suite,id,anchor,measured,claimed,tolerance,pass.
std::string to_csv(const Report& r);

/// Writes the whole text or throws Io; nothing is left behind on failure.
void write_file(const std::string& path, const std::string& text);

}  // namespace jetex::report
