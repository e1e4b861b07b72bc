#pragma once

#include <optional>
#include <vector>

#include "alc/grid.hpp"
#include "alc/measure.hpp"
#include "alc/mesh.hpp"

namespace alc {

// (1 - alpha t)^{1/alpha}; +inf maps to 0. Throws for t <= 1/alpha.
double psi_alpha(double t, double alpha);

// f = psi_alpha(base) with -1/n < alpha < 0 and base >= 1/alpha on its domain.
class AlphaConcaveFunction {
 public:
  AlphaConcaveFunction(double alpha, GridFunction base, bool require_nonnegative = false);

  double alpha() const { return alpha_; }
  const GridFunction& base() const { return base_; }
  const Grid& grid() const { return base_.grid(); }
  int dim() const { return base_.dim(); }

  GridFunction values() const;   // f, zero off the domain
  GridFunction density() const;  // f^{1 - alpha}
  // Support box in coordinates, per axis.
  std::array<std::array<double, 2>, 2> support_box() const;
  // Largest value of f on nodes of the grid boundary ring.
  double boundary_max() const;

 private:
  double alpha_;
  GridFunction base_;
};

struct CombinationOptions {
  int dual_refine = 2;  // 2D only: dual cells per primal cell
};

// Base (phi* + t psi*)* on a grid spanning the support K_f + t K_g with the
// node count of K_f. One-dimensional combinations are exact for the
// piecewise-linear interpolants; 2D uses the sampled dual grid and needs
// rectangular supports.
AlphaConcaveFunction alpha_combination(const AlphaConcaveFunction& f,
                                       const AlphaConcaveFunction& g, double t,
                                       const CombinationOptions& opt = {});

Quadrature total_mass(const AlphaConcaveFunction& f);

// Integral of |x|^p (1 - alpha phi)^{1/alpha - l}; throws HypothesisViolation
// when n - l + p >= -1/alpha.
Quadrature weighted_moment(const AlphaConcaveFunction& f, double p, int l);

struct NumericVariation {
  std::vector<double> steps;
  std::vector<double> quotients;
  double value = 0.0;  // Richardson on the last two quotients
};
NumericVariation first_variation_numeric(const AlphaConcaveFunction& f,
                                         const AlphaConcaveFunction& g,
                                         std::vector<double> steps = {0.08, 0.04, 0.02, 0.01},
                                         const CombinationOptions& opt = {});

double self_variation_formula(const AlphaConcaveFunction& f);

// psi* <= beta1 phi* + beta2 with beta1 searched over powers of two.
struct Comparability {
  double beta1;
  double beta2;
};
std::optional<Comparability> certify_comparability(const AlphaConcaveFunction& f,
                                                   const AlphaConcaveFunction& g);

struct FormulaVariation {
  double interior = 0.0;
  double boundary = 0.0;
  double total = 0.0;
  Comparability certificate{};
};
FormulaVariation first_variation_formula(const AlphaConcaveFunction& f,
                                         const AlphaConcaveFunction& g);

// Push-forward of f^{1-alpha} dx under the gradient of the interpolated base.
// Without bins identical gradients are merged; with bins mass is deposited
// multilinearly on the bin nodes.
DiscreteMeasure euclidean_sam(const AlphaConcaveFunction& f,
                              const std::optional<Grid>& bins = std::nullopt);

struct SphericalSam {
  DiscreteMeasure measure;
  bool truncated = false;  // support meets the grid boundary where f is not negligible
};
SphericalSam spherical_sam(const AlphaConcaveFunction& f, double negligible = 1e-12);

// Interior term of the gradient balance identity plus its boundary term,
// both as vectors; they cancel for admissible f.
struct Balance {
  Vec interior{};
  Vec boundary{};
  double scale = 0.0;  // total mass of the Euclidean measure
};
Balance gradient_balance(const AlphaConcaveFunction& f);

}  // namespace alc
