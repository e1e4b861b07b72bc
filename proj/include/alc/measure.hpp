#pragma once

#include <vector>

#include "alc/grid.hpp"

namespace alc {

// Finite sum of weighted Dirac masses in R^1 or R^2. `unit` marks measures
// living on the unit sphere (spherical surface area measures).
struct DiscreteMeasure {
  int dim = 1;
  std::vector<Vec> points;
  std::vector<double> weights;
  bool unit = false;

  std::size_t size() const { return points.size(); }
  void add(const Vec& p, double w) {
    points.push_back(p);
    weights.push_back(w);
  }
  double total() const;
  Vec barycenter() const;          // normalised by total mass
  double first_moment() const;     // integral of |y|
  double diameter() const;         // of the support
  DiscreteMeasure normalized() const;
  // Sorted lexicographically; points within tol (1 + |y|) per coordinate of a
  // group's first point collapse to their weighted mean; zero weights dropped.
  DiscreteMeasure merged(double tol = 0.0) const;
  void validate() const;
};

// Multilinear (cloud-in-cell) deposit on the nodes of `bins`; preserves
// mass and first moments. Throws if a point lies outside the bin grid.
DiscreteMeasure bin_measure(const DiscreteMeasure& m, const Grid& bins);

}  // namespace alc
