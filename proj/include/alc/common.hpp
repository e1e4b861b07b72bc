#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace alc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Points live in R^1 or R^2; the second slot is ignored when dim == 1.
using Vec = std::array<double, 2>;

inline double dot(const Vec& a, const Vec& b, int dim) {
  double s = a[0] * b[0];
  if (dim == 2) s += a[1] * b[1];
  return s;
}

inline double norm(const Vec& a, int dim) { return std::sqrt(dot(a, a, dim)); }

inline double dist(const Vec& a, const Vec& b, int dim) {
  Vec d{a[0] - b[0], a[1] - b[1]};
  return norm(d, dim);
}

// Malformed data: shapes, NaN, broken invariants. CLI exit code 2.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data is well formed but an operation's precondition fails.
class PreconditionError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// A parameter choice outside the integrability range.
class HypothesisViolation : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Iterative method stopped without meeting its tolerance. CLI exit code 3.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace alc
