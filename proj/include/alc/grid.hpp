#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "alc/common.hpp"

namespace alc {

struct Axis {
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  double spacing() const { return (max - min) / (count - 1); }
  // Endpoints are returned exactly so that grids sharing a bound share the node.
  double node(int i) const { return i == count - 1 ? max : min + i * spacing(); }
  bool operator==(const Axis&) const = default;
};

// Tensor grid in one or two dimensions; values are stored row major with
// axis 0 slowest.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<Axis> axes);
  static Grid line(double min, double max, int count);
  static Grid square(double min, double max, int count);

  int dim() const { return dim_; }
  const Axis& axis(int k) const { return axes_[k]; }
  int count(int k) const { return k < dim_ ? axes_[k].count : 1; }
  double spacing(int k) const { return axes_[k].spacing(); }
  std::size_t size() const { return std::size_t(count(0)) * count(1); }
  std::size_t index(int i0, int i1 = 0) const { return std::size_t(i0) * count(1) + i1; }
  std::array<int, 2> multi(std::size_t flat) const {
    return {int(flat / count(1)), int(flat % count(1))};
  }
  Vec point(std::size_t flat) const;
  Vec point(int i0, int i1) const;
  double cell_volume() const;
  double max_spacing() const;
  double diameter() const;
  bool contains(const Vec& x, double slack = 0.0) const;
  bool operator==(const Grid& o) const;

 private:
  int dim_ = 0;
  std::array<Axis, 2> axes_{};
};

// Grid samples of an extended-real function: +inf marks points outside the
// effective domain. NaN and -inf are rejected.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(Grid grid, std::vector<double> values, bool convex = false,
               bool coercive = false);

  static GridFunction sample(const Grid& grid, const std::function<double(const Vec&)>& fn,
                             bool convex = false, bool coercive = false);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double at(int i0, int i1 = 0) const { return values_[grid_.index(i0, i1)]; }
  bool finite(std::size_t k) const { return values_[k] < kInf; }
  bool claimed_convex() const { return convex_; }
  bool claimed_coercive() const { return coercive_; }
  int dim() const { return grid_.dim(); }

  bool all_infinite() const;
  bool all_finite() const;
  // Index range [lo, hi] of finite nodes per axis; throws if none.
  std::array<std::array<int, 2>, 2> finite_box() const;
  // True when the finite nodes fill exactly the box returned by finite_box().
  bool finite_domain_is_box() const;
  // A node is interior when its axis neighbours exist on the grid and are finite.
  bool interior(std::size_t k) const;

 private:
  void validate() const;

  Grid grid_;
  std::vector<double> values_;
  bool convex_ = false;
  bool coercive_ = false;
};

// Midpoint convexity along axes and diagonals, tolerance 1e-9 (1 + |v|).
bool is_discretely_convex(const GridFunction& g);

// Linear minorant slope a > 0 anchored at the minimiser, probed on the grid
// boundary ring. Empty when the ring does not rise above the minimum.
struct CoercivityFit {
  double slope;
  double offset;
};
std::optional<CoercivityFit> coercivity_fit(const GridFunction& g);

struct Quadrature {
  double value = 0.0;
  double error = 0.0;
};

// Tensor trapezoid over the whole grid. Every node must be finite.
Quadrature integrate(const GridFunction& g);
// Trapezoid of g * w; nodes where w == 0 are skipped even when g is +inf.
Quadrature integrate(const GridFunction& g, const GridFunction& w);
// Trapezoid restricted to cells whose corners are finite in `domain`.
Quadrature integrate_on_domain(const GridFunction& g, const GridFunction& domain);

struct Gradient {
  Vec value{};
  bool differentiable = true;
};
// Central differences; kink flagged when one-sided slopes differ by more than
// kink_tol (default 10 h). Throws on nodes whose stencil leaves the domain.
Gradient finite_gradient(const GridFunction& g, std::size_t node, double kink_tol = -1.0);

// Multilinear interpolation; +inf when a corner is infinite. Throws outside.
double interpolate(const GridFunction& g, const Vec& x);

}  // namespace alc
