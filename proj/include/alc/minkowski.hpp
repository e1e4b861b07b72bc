#pragma once

#include <optional>
#include <string>
#include <vector>

#include "alc/grid.hpp"
#include "alc/measure.hpp"
#include "alc/transport.hpp"

namespace alc {

// Density part (1 - alpha base)^{1/alpha - 1} sampled on the grid nodes plus
// singular atoms sitting where base <= 1/alpha + atom_tol.
struct AlphaConcaveMeasure {
  double alpha = -0.5;
  GridFunction base;
  GridFunction density;
  DiscreteMeasure atoms;

  double density_mass() const;  // trapezoid
  double total() const { return density_mass() + atoms.total(); }
  // Density as trapezoid-weighted node atoms, followed by the singular atoms.
  DiscreteMeasure discretized() const;
};

// Trapezoid weight of every node of the grid.
std::vector<double> node_weights(const Grid& g);

// -integral rho^{1/(1 - alpha)}; atoms do not contribute.
double f_alpha(const GridFunction& density, double alpha);

// C - M^a1 - M^a2 as a function of the first moment M, with
// C = -beta (integral over |x| <= 1 of |x|^{a1/alpha} + integral over |x| >= 1 of |x|^{a2/alpha}),
// beta = -alpha (1 - alpha)^{1/alpha - 1}, 0 < a1 < -alpha n < a2 < 1.
struct FAlphaLowerBound {
  double c1 = 0.0, c2 = 0.0, a1 = 0.0, a2 = 0.0;
  double operator()(double moment) const;
};
FAlphaLowerBound f_alpha_lower_bound(double alpha, int n, double a1, double a2);

// (1 - alpha) F(rho) - alpha T(rho, mu), with the density discretised as
// trapezoid-weighted node atoms.
double objective(const AlphaConcaveMeasure& rho, const DiscreteMeasure& mu);
double objective(const GridFunction& density, const DiscreteMeasure& atoms, double alpha,
                 const DiscreteMeasure& mu);

struct SolveConfig {
  double alpha = -0.5;
  std::optional<Grid> grid;  // default: [-20 r, 20 r]^n, r = largest |y| in supp mu
  double theta = 0.5;        // relaxation toward the minimiser of the linearised problem
  double tol = 1e-10;        // relative objective decrease that stops the loop
  int max_iter = 500;
  std::string backend = "exact";  // or "entropic"
  double epsilon = 1e-2;
  unsigned long seed = 0;
  double atom_tol = -1.0;  // default 1e-6 |1/alpha|
};

struct SolveReport {
  std::vector<double> objective_trace;
  std::vector<double> c0_trace;
  double sam_residual_w1 = 0.0;
  double sam_diameter = 0.0;
  int knott_smith_violations = 0;
  double singular_mass = 0.0;
  double spherical_ratio = 0.0;  // boundary measure / interior measure of the output
  double comparison_objective = 0.0;  // uniform-ball candidate
  int iterations = 0;
  int rejected_steps = 0;
  bool converged = false;
};

struct SolveResult {
  AlphaConcaveMeasure solution;
  SolveReport report;
  double c0 = 0.0;
  GridFunction potential;  // phi_1 with inf phi_1 = 0
  DiscreteMeasure sam;     // Euclidean measure of the output, scaled to mu's total
  TransportPlan plan;      // output measure (discretized) to mu
};

// Majorise-minimise iteration: linearise T at the current iterate through
// its Kantorovich potential, minimise the resulting convex problem in closed
// form, relax by theta and repeat. The objective never increases.
// Throws PreconditionError when mu is not centred, not full-dimensional or
// has no first moment; NonConvergence is not thrown, the report carries
// converged = false instead.
SolveResult solve(const DiscreteMeasure& mu, const SolveConfig& config);

// Euclidean measure of the output: gradient push-forward of the nodal
// density through the piecewise-linear base, scaled to `total`.
DiscreteMeasure solution_sam(const AlphaConcaveMeasure& m, double total);

struct MongeAmpereResidual {
  GridFunction field;  // residual on checked nodes, 0 elsewhere
  std::vector<std::size_t> nodes;
  double max = 0.0;
  double mean = 0.0;
};
// |h(grad phi) det D^2 phi - (1 - alpha phi)^{(1 - alpha)/alpha}| at nodes whose
// 3^n stencil is finite, central differences, h interpolated multilinearly.
MongeAmpereResidual monge_ampere_residual(const GridFunction& phi, const GridFunction& h,
                                          double alpha);

}  // namespace alc
