#pragma once

#include <stdexcept>
#include <string>

namespace stacksort {

// Input/format errors.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};
struct NotABijection : std::runtime_error {
  explicit NotABijection(const std::string& what) : std::runtime_error(what) {}
};
struct IndexOutOfRange : std::out_of_range {
  explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};
struct NonPositiveResult : std::runtime_error {
  explicit NonPositiveResult(const std::string& what) : std::runtime_error(what) {}
};

// Machine errors.
struct IllegalMove : std::runtime_error {
  explicit IllegalMove(const std::string& what) : std::runtime_error(what) {}
};
struct LimitExceeded : std::runtime_error {
  explicit LimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Law-check errors.
struct WrongPattern : std::runtime_error {
  explicit WrongPattern(const std::string& what) : std::runtime_error(what) {}
};
struct TraceBudgetExceeded : std::runtime_error {
  explicit TraceBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration/checkpoint errors.
struct CheckpointMismatch : std::runtime_error {
  explicit CheckpointMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct CorruptCheckpoint : std::runtime_error {
  explicit CorruptCheckpoint(const std::string& what) : std::runtime_error(what) {}
};
struct ResourceBudgetExceeded : std::runtime_error {
  explicit ResourceBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Internal-consistency errors: these indicate a bug, not bad input.
struct UnhandledCase : std::logic_error {
  explicit UnhandledCase(const std::string& what) : std::logic_error(what) {}
};
struct LiftFailed : std::logic_error {
  explicit LiftFailed(const std::string& what) : std::logic_error(what) {}
};

}  // namespace stacksort
