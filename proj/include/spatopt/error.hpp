#pragma once

#include <stdexcept>
#include <string>

namespace spatopt {

/// Input violates a documented precondition (bad spec, empty genotype, malformed file).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed file contents or a file that violates its format contract.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent configuration detected at setup time.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cross-section without material, so no centroid or stiffness exists.
class DegenerateSectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer than three distinct points, or all points collinear.
class DegenerateTriangulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shooting solve failed even with pressure continuation.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace spatopt
