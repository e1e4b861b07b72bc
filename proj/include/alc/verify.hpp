#pragma once

#include <string>
#include <vector>

#include "alc/alpha.hpp"
#include "alc/measure.hpp"

namespace alc {

struct NecessaryReport {
  double first_moment = 0.0;
  bool first_moment_finite = false;
  double barycenter_norm = 0.0;
  double diameter = 0.0;
  int affine_hull_dim = 0;
  bool pass = false;
  std::string reason;  // empty on pass
};

// Finite first moment, barycenter at the origin (relative to the support
// diameter, tolerance `tol`) and full-dimensional support, the latter from
// the rank of the centred second-moment matrix. Throws on an empty measure.
NecessaryReport check_necessary_conditions(const DiscreteMeasure& mu, double tol = 1e-9);

struct IntegrabilityReport {
  std::vector<double> extents;     // half-widths of the nested boxes
  std::vector<double> partial;     // integral over each box
  std::vector<double> increments;  // partial[k+1] - partial[k]
  std::vector<double> ratios;      // increments[k+1] / increments[k]
  bool pass = false;
};

// Partial integrals of |x|^p (1 - alpha phi)^{1/alpha - l} over boxes
// [-R, R]^n; passes when every increment ratio stays below one. Throws
// HypothesisViolation outside the integrability range.
IntegrabilityReport check_integrability_trend(const AlphaConcaveFunction& f, double p, int l,
                                              const std::vector<double>& extents);

struct BalanceReport {
  std::vector<Vec> directions;
  std::vector<double> residuals;
  Vec interior{};
  Vec boundary{};
  double scale = 0.0;
  double max_residual = 0.0;
  bool pass = false;  // max_residual <= 1e-3 scale
};

// Balance identity along the 2n axis directions and 8 seeded random ones.
BalanceReport check_gradient_balance(const AlphaConcaveFunction& f, unsigned long seed = 0);

}  // namespace alc
