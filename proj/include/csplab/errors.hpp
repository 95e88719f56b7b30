#pragma once

#include <stdexcept>
#include <string>

namespace csplab {

// A combinatorial enumeration would exceed its configured cap. The message
// names the offending cardinality.
class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Mixed instance whose hard part admits no assignment (or LP-infeasible).
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

// Strict-mode evaluation hit a violated hard constraint.
class HardViolationError : public std::runtime_error {
 public:
  explicit HardViolationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or JSON document.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace csplab
