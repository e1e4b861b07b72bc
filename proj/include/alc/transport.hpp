#pragma once

#include <vector>

#include "alc/grid.hpp"
#include "alc/measure.hpp"

namespace alc {

// Sparse coupling between the atoms of two measures.
struct TransportPlan {
  std::size_t n = 0, m = 0;
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;
};

// phi on the source atoms and phi_star on the target atoms with
// phi(x_i) + phi_star(y_j) >= <x_i, y_j>; phi vanishes at the
// lexicographically smallest source atom.
struct PotentialPair {
  std::vector<double> phi;
  std::vector<double> phi_star;
  double duality_gap = 0.0;
};

struct ExactTransport {
  double value = 0.0;  // primal objective sum pi_ij <x_i, y_j>
  double dual = 0.0;   // sum phi d(rho) + sum phi_star d(mu)
  TransportPlan plan;
  PotentialPair potentials;
  long pivots = 0;
};

// Maximal correlation between two measures of equal total mass (relative
// mismatch <= 1e-9), solved exactly by the network simplex method.
ExactTransport max_correlation_exact(const DiscreteMeasure& rho, const DiscreteMeasure& mu);

struct EntropicTransport {
  double value = 0.0;           // correlation of the rounded plan
  TransportPlan plan;           // dense, exactly feasible after rounding
  std::vector<double> phi_star; // -g from the scaling, c-transform for empty atoms
  double epsilon = 0.0;
  double bound = 0.0;           // epsilon log(N M)
  double marginal_error = 0.0;  // l1 row violation before rounding
  int iterations = 0;
};

// Log-domain Sinkhorn with epsilon halving down to `epsilon`, followed by
// the rounding step that restores exact marginals. Throws NonConvergence
// when the row marginals are not within 1e-9 (relative) after max_iter sweeps.
EntropicTransport max_correlation_entropic(const DiscreteMeasure& rho, const DiscreteMeasure& mu,
                                           double epsilon, int max_iter = 100000);

struct KnottSmithViolation {
  int i;
  int j;
  double slack;
};

// Fenchel slack phi_i + phi_star_j - <x_i, y_j> on every positive entry;
// entries with |slack| > tol are returned.
std::vector<KnottSmithViolation> knott_smith_check(const TransportPlan& plan,
                                                   const PotentialPair& pot,
                                                   const DiscreteMeasure& rho,
                                                   const DiscreteMeasure& mu, double tol);

// Grid potential: y_j must be a subgradient of phi at the node nearest to x_i
// (subgradient_contains with tolerance tol). Slack is the discrete Fenchel gap.
std::vector<KnottSmithViolation> knott_smith_check(const TransportPlan& plan,
                                                   const GridFunction& phi,
                                                   const DiscreteMeasure& rho,
                                                   const DiscreteMeasure& mu, double tol);

// (1/2n) min over sampled unit e and real l of  integral |<y, e> - l| d(mu).
// Directions: equally spaced on the half circle (2D) or e = 1 (1D, exact).
// `value` can only overestimate the infimum; `certified` subtracts the
// Lipschitz margin (1/2n) (pi / 2K) integral |y| d(mu) and is a true lower bound.
struct FirstMomentBound {
  double value = 0.0;
  double certified = 0.0;
  Vec direction{};
  double offset = 0.0;  // weighted median along `direction`
  int directions = 0;
};
FirstMomentBound first_moment_bound_constant(const DiscreteMeasure& mu, int directions = 256);

// Difference quotients of t -> (phi + t g)*(y) against -g(grad phi*(y)).
struct BermanCheck {
  std::vector<double> steps;
  std::vector<double> quotients;
  double derivative = 0.0;  // Richardson on the last two quotients
  double predicted = 0.0;   // -g at the maximising node
  double residual = 0.0;    // |derivative - predicted|
  Vec gradient{};           // grad phi*(y)
};
BermanCheck berman_derivative_check(const GridFunction& phi, const GridFunction& g, const Vec& y,
                                    std::vector<double> steps = {0.04, 0.02, 0.01, 0.005});

// Wasserstein-1 distance between measures of equal mass (exact).
double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b);

}  // namespace alc
