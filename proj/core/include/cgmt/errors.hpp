#pragma once

#include <stdexcept>
#include <string>

namespace cgmt {

/// Failure categories surfaced by the library. The CLI maps these onto
/// process exit codes, so new kinds need a matching entry there.
enum class ErrorKind {
  InvalidDimension,
  Shape,
  InsufficientSamples,
  InvalidArgument,
  InvalidTolerance,
  Domain,
  Regime,
  Capability,
  Numeric,
  ExperimentInvalid,
  InvalidConfig,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace cgmt
