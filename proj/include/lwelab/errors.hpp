#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lwelab {

// Problem size exceeds a desk-scale guard (statevector, enumeration, ...).
class CapacityExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation restricted to prime (or odd prime) q was given something else.
class UnsupportedModulus : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative numeric routine failed to converge. Carries the iteration
// trace (iteration, lower, upper) for post-mortem.
class NumericalFailure : public std::runtime_error {
 public:
  struct TracePoint {
    std::size_t iteration;
    double lower;
    double upper;
  };

  NumericalFailure(const std::string& what, std::vector<TracePoint> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::vector<TracePoint>& trace() const { return trace_; }

 private:
  std::vector<TracePoint> trace_;
};

// Invalid experiment configuration (CLI exit code 2).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lwelab
