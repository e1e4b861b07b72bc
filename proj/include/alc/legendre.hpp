#pragma once

#include <vector>

#include "alc/grid.hpp"

namespace alc {

struct Conjugate {
  GridFunction values;
  // Primal node (flat index) attaining the supremum at each dual node.
  std::vector<std::size_t> argmax;
};

// Slope range of the data along each axis, padded by `pad` of its width,
// with `refine` times as many cells as the primal axis.
Grid default_dual_grid(const GridFunction& phi, double pad = 0.1, int refine = 1);

// Discrete transform phi*(y) = max over finite nodes of <x, y> - phi(x).
// Two-dimensional inputs are swept along axis 0 and then axis 1; ties keep
// the smallest index of each sweep.
Conjugate conjugate(const GridFunction& phi, const Grid& dual);
Conjugate conjugate(const GridFunction& phi);

GridFunction biconjugate(const GridFunction& phi, const Grid& primal, const Grid& dual);
GridFunction biconjugate(const GridFunction& phi);

// |phi*(grad phi(x)) + phi(x) - <x, grad phi(x)>| with phi* interpolated.
double fenchel_young_residual(const GridFunction& phi, const GridFunction& phistar,
                              std::size_t node);

// y is a subgradient at node x0 when phi(x) >= phi(x0) + <y, x - x0> - tol (1 + |phi(x)|)
// for every finite node x.
bool subgradient_contains(const GridFunction& phi, std::size_t x0, const Vec& y, double tol);

// Exact discrete conjugate at arbitrary points through lower hulls of the
// grid rows. O(log n) per query in 1D, O(n0 log n1) in 2D.
class ConjugateEvaluator {
 public:
  explicit ConjugateEvaluator(const GridFunction& phi);

  double operator()(const Vec& y, std::size_t* arg = nullptr) const;
  const GridFunction& function() const { return phi_; }

  // One-dimensional only: slopes of the hull edges, i.e. the kinks of the
  // conjugate of the piecewise-linear interpolant, and the domain ends.
  const std::vector<double>& slopes() const { return slopes_[0]; }
  double domain_min() const;
  double domain_max() const;

 private:
  struct Row {
    std::vector<int> hull;  // column indices
  };
  GridFunction phi_;
  std::vector<Row> rows_;
  std::vector<std::vector<double>> slopes_;
  std::vector<double> xs1_;
};

}  // namespace alc
