#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nlra {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied something outside an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An activation that is not easily invertible (c1 <= 0) was passed to a
/// method that needs to invert the kernel feature map.
class UnsupportedActivationError : public InputError {
 public:
  using InputError::InputError;
};

/// A decomposition failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The r-subset enumeration would exceed the configured budget.
class BudgetError : public Error {
 public:
  BudgetError(std::string what, std::uint64_t subsets)
      : Error(std::move(what)), subsets_(subsets) {}

  std::uint64_t subsets() const noexcept { return subsets_; }

 private:
  std::uint64_t subsets_;
};

/// Stochastic optimization blew up; carries the per-epoch objective trace.
class DivergenceError : public Error {
 public:
  DivergenceError(std::string what, std::vector<double> trace)
      : Error(std::move(what)), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// lambda_r - lambda_{r+1} vanished, so the top-r eigenspace is not defined.
class DegenerateGapError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlra
