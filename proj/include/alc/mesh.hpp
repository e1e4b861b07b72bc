#pragma once

#include <vector>

#include "alc/grid.hpp"

namespace alc {

// Closed-form integrals of (1 - a t)^{1/a} and (1 - a t)^{(1-a)/a} along
// linear pieces. With H(t) = (1 - a t)^{1/a + 1} / (1 + a) we have
// H' = -psi and H'' = psi^{1-a}, so every integral is a divided difference
// of H; near-coincident arguments switch to Taylor or quadrature forms.
class PsiCalculus {
 public:
  explicit PsiCalculus(double alpha);

  double psi(double t) const;      // (1 - a t)^{1/a}
  double density(double t) const;  // psi^{1-a}

  // Integral of psi^{1-a} over a segment of length len where the base goes a -> b.
  double segment_density(double a, double b, double len) const;
  // Integral of psi over the same segment.
  double segment_psi(double a, double b, double len) const;
  // Integral of psi^{1-a} over a triangle of the given area with vertex values a, b, c.
  double triangle_density(double a, double b, double c, double area) const;

 private:
  double H(double t) const;
  double dH(double t) const;
  double d3H(double t) const;
  double d4H(double t) const;
  double dd1(double p, double q) const;  // H[p, q]
  double alpha_;
};

// Linear piece of the interpolated base: a 1D cell or a 2D half-cell triangle.
struct Piece {
  Vec gradient{};
  double mass = 0.0;     // integral of f^{1-a}
  double measure = 0.0;  // length or area
};

// Boundary facet of the interpolated finite domain with outward unit normal.
struct Facet {
  Vec normal{};
  double length = 0.0;  // 1 for the endpoints in 1D
  double mass = 0.0;    // integral of f along the facet
};

struct PlMesh {
  std::vector<Piece> pieces;
  std::vector<Facet> facets;
  bool touches_grid_boundary = false;
};

// Pieces and facets of the piecewise-linear interpolant of `base`. In 1D a
// cell straddling an isolated kink is split between the neighbouring slopes
// in proportion to the sub-cell widths. In 2D each cell is cut along its
// (i,j)-(i+1,j+1) diagonal.
PlMesh pl_mesh(const GridFunction& base, double alpha, double kink_tol = -1.0);

}  // namespace alc
