#pragma once

#include <stdexcept>
#include <string>

namespace treemod {

/// Raised by parse_graph. The kind distinguishes the failure classes so
/// callers can map them to diagnostics without string matching.
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    EmptyInput,
    MalformedLine,
    SelfLoop,
    Disconnected,
  };

  ParseError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Numerical failure inside a solve: iteration cap, stalled constraint
/// generation, a rounding window miss, or a broken internal identity.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration-based routine was asked to run beyond its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace treemod
