#pragma once

#include <stdexcept>
#include <string>

namespace jetex {

enum class ErrorKind {
  Contract,
  EmptyGrid,
  DegenerateSection,
  Division,
  UnsupportedGeometry,
  IllConditioned,
  Infeasible,
  NotHolomorphic,
  NotPositive,
  NonIntegrable,
  Precondition,
  Divergent,
  NodeCollision,
  Schema,
  Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so that callers (the
/// report runner in particular) can identify the offending check.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Contract: return "contract";
    case ErrorKind::EmptyGrid: return "empty-grid";
    case ErrorKind::DegenerateSection: return "degenerate-section";
    case ErrorKind::Division: return "division";
    case ErrorKind::UnsupportedGeometry: return "unsupported-geometry";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::NotHolomorphic: return "not-holomorphic";
    case ErrorKind::NotPositive: return "operator-not-positive";
    case ErrorKind::NonIntegrable: return "non-integrable";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Divergent: return "divergent-integral";
    case ErrorKind::NodeCollision: return "node-collision";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace jetex
