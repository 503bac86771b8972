#pragma once

#include <stdexcept>
#include <string>

namespace capplan {

/// Raised when an operation's precondition does not hold. The message is a
/// short stable tag ("empty network", "site-saturated", ...) that callers and
/// tests match on.
class PlanningError : public std::runtime_error {
 public:
  explicit PlanningError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for unreadable or malformed input files.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace capplan
