#ifndef GRW_ERRORS_HPP
#define GRW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace grw {

// Invalid arguments (bad epsilon, zero start site, t outside [0,1), ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// Series or iteration hit its term/iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Linear transformation asked to work at an integer c-a-b.
class DegenerateParameterError : public std::runtime_error {
 public:
  explicit DegenerateParameterError(const std::string& what) : std::runtime_error(what) {}
};

class PoleError : public std::domain_error {
 public:
  explicit PoleError(const std::string& what) : std::domain_error(what) {}
};

// Requested work exceeds a configured size limit.
class ResourceError : public std::length_error {
 public:
  explicit ResourceError(const std::string& what) : std::length_error(what) {}
};

// A quantity that must be nonnegative came out clearly negative.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Too many Monte Carlo trajectories hit the step cap.
class CensoringError : public std::runtime_error {
 public:
  explicit CensoringError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace grw

#endif
