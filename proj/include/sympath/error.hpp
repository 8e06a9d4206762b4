#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sympath {

/// Raised for malformed inputs: bad grids, unknown components, invalid specs.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a function is asked to evaluate outside its admissible domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Path data violates a precondition of the consumer (e.g. nonpositive price).
class InvalidData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SimulationFailure : public std::runtime_error {
 public:
  SimulationFailure(std::size_t path, const std::string& what)
      : std::runtime_error("path " + std::to_string(path) + ": " + what), path_(path) {}
  std::size_t path() const noexcept { return path_; }

 private:
  std::size_t path_;
};

class WeightOverflow : public std::runtime_error {
 public:
  WeightOverflow(double max_exponent, const std::string& what)
      : std::runtime_error(what + " (max exponent " + std::to_string(max_exponent) + ")"),
        max_exponent_(max_exponent) {}
  double max_exponent() const noexcept { return max_exponent_; }

 private:
  double max_exponent_;
};

class NoOrderFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SYMPATH_REQUIRE(cond, msg)                              \
  do {                                                          \
    if (!(cond)) throw ::sympath::InvalidArgument(msg);         \
  } while (false)

}  // namespace sympath
