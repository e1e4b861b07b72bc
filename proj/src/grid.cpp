#include "alc/grid.hpp"

#include <algorithm>
#include <cmath>

#include "alc/kernels.hpp"

namespace alc {

Grid::Grid(std::vector<Axis> axes) {
  if (axes.empty() || axes.size() > 2) throw InvalidInput("grid dimension must be 1 or 2");
  dim_ = int(axes.size());
  for (int k = 0; k < dim_; ++k) {
    const Axis& a = axes[k];
    if (a.count < 2) throw InvalidInput("grid axis needs at least 2 nodes");
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max))
      throw InvalidInput("grid axis requires finite min < max");
    axes_[k] = a;
  }
}

Grid Grid::line(double min, double max, int count) { return Grid({Axis{min, max, count}}); }

Grid Grid::square(double min, double max, int count) {
  return Grid({Axis{min, max, count}, Axis{min, max, count}});
}

Vec Grid::point(int i0, int i1) const {
  Vec x{axes_[0].node(i0), 0.0};
  if (dim_ == 2) x[1] = axes_[1].node(i1);
  return x;
}

Vec Grid::point(std::size_t flat) const {
  auto m = multi(flat);
  return point(m[0], m[1]);
}

double Grid::cell_volume() const {
  double v = spacing(0);
  if (dim_ == 2) v *= spacing(1);
  return v;
}

double Grid::max_spacing() const {
  double h = spacing(0);
  if (dim_ == 2) h = std::max(h, spacing(1));
  return h;
}

double Grid::diameter() const {
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) s += std::pow(axes_[k].max - axes_[k].min, 2);
  return std::sqrt(s);
}

bool Grid::contains(const Vec& x, double slack) const {
  for (int k = 0; k < dim_; ++k)
    if (x[k] < axes_[k].min - slack || x[k] > axes_[k].max + slack) return false;
  return true;
}

bool Grid::operator==(const Grid& o) const {
  if (dim_ != o.dim_) return false;
  for (int k = 0; k < dim_; ++k)
    if (!(axes_[k] == o.axes_[k])) return false;
  return true;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values, bool convex, bool coercive)
    : grid_(std::move(grid)), values_(std::move(values)), convex_(convex), coercive_(coercive) {
  validate();
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(const Vec&)>& fn,
                                  bool convex, bool coercive) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.point(k));
  return GridFunction(grid, std::move(v), convex, coercive);
}

namespace {

// Finite entries along a line must be one contiguous run.
bool contiguous(const std::vector<double>& v, std::size_t start, std::size_t step, int n) {
  int state = 0;  // 0 before run, 1 inside, 2 after
  for (int i = 0; i < n; ++i) {
    const bool fin = v[start + i * step] < kInf;
    if (fin && state == 2) return false;
    if (fin) state = 1;
    else if (state == 1) state = 2;
  }
  return true;
}

}  // namespace

void GridFunction::validate() const {
  if (grid_.dim() == 0) throw InvalidInput("grid function without grid");
  if (values_.size() != grid_.size()) throw InvalidInput("value count does not match grid");
  for (double v : values_)
    if (std::isnan(v) || v == -kInf) throw InvalidInput("grid values must not be NaN or -inf");
  const int n0 = grid_.count(0), n1 = grid_.count(1);
  for (int j = 0; j < n1; ++j)
    if (!contiguous(values_, j, n1, n0))
      throw InvalidInput("finite domain is not contiguous along axis 0");
  if (grid_.dim() == 2)
    for (int i = 0; i < n0; ++i)
      if (!contiguous(values_, std::size_t(i) * n1, 1, n1))
        throw InvalidInput("finite domain is not contiguous along axis 1");
  if (convex_ && !is_discretely_convex(*this))
    throw InvalidInput("function flagged convex fails the midpoint test");
  if (coercive_ && !coercivity_fit(*this))
    throw InvalidInput("function flagged coercive has no positive linear minorant");
}

bool GridFunction::all_infinite() const {
  return std::none_of(values_.begin(), values_.end(), [](double v) { return v < kInf; });
}

bool GridFunction::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v < kInf; });
}

std::array<std::array<int, 2>, 2> GridFunction::finite_box() const {
  std::array<std::array<int, 2>, 2> box{{{grid_.count(0), -1}, {grid_.count(1), -1}}};
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!finite(k)) continue;
    auto m = grid_.multi(k);
    for (int d = 0; d < 2; ++d) {
      box[d][0] = std::min(box[d][0], m[d]);
      box[d][1] = std::max(box[d][1], m[d]);
    }
  }
  if (box[0][1] < 0) throw PreconditionError("function is identically +inf");
  return box;
}

bool GridFunction::finite_domain_is_box() const {
  auto b = finite_box();
  for (std::size_t k = 0; k < values_.size(); ++k) {
    auto m = grid_.multi(k);
    const bool in = m[0] >= b[0][0] && m[0] <= b[0][1] && m[1] >= b[1][0] && m[1] <= b[1][1];
    if (in != finite(k)) return false;
  }
  return true;
}

bool GridFunction::interior(std::size_t k) const {
  if (!finite(k)) return false;
  auto m = grid_.multi(k);
  for (int d = 0; d < grid_.dim(); ++d) {
    if (m[d] == 0 || m[d] == grid_.count(d) - 1) return false;
    auto lo = m, hi = m;
    --lo[d];
    ++hi[d];
    if (!finite(grid_.index(lo[0], lo[1])) || !finite(grid_.index(hi[0], hi[1]))) return false;
  }
  return true;
}

bool is_discretely_convex(const GridFunction& g) {
  const Grid& G = g.grid();
  std::vector<std::array<int, 2>> dirs{{1, 0}};
  if (G.dim() == 2) dirs = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
  const int n0 = G.count(0), n1 = G.count(1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const double v = g.at(i, j);
      for (auto d : dirs) {
        const int im = i - d[0], jm = j - d[1], ip = i + d[0], jp = j + d[1];
        if (im < 0 || ip >= n0 || jm < 0 || jp >= n1 || ip < 0 || jm >= n1 || jp < 0) continue;
        const double a = g.at(im, jm), b = g.at(ip, jp);
        if (!(a < kInf) || !(b < kInf)) continue;
        if (!(v < kInf)) return false;
        if (a + b < 2.0 * v - 1e-9 * (1.0 + std::abs(v))) return false;
      }
    }
  return true;
}

std::optional<CoercivityFit> coercivity_fit(const GridFunction& g) {
  const Grid& G = g.grid();
  const int dim = G.dim();
  std::size_t kmin = 0;
  double m = kInf;
  for (std::size_t k = 0; k < g.values().size(); ++k)
    if (g[k] < m) {
      m = g[k];
      kmin = k;
    }
  if (!(m < kInf)) return std::nullopt;
  const Vec xm = G.point(kmin);
  double slope = kInf;
  for (std::size_t k = 0; k < g.values().size(); ++k) {
    auto idx = G.multi(k);
    bool ring = false;
    for (int d = 0; d < dim; ++d) ring = ring || idx[d] == 0 || idx[d] == G.count(d) - 1;
    if (!ring || !g.finite(k)) continue;
    const double r = dist(G.point(k), xm, dim);
    if (r == 0.0) return std::nullopt;
    slope = std::min(slope, (g[k] - m) / r);
  }
  if (slope == kInf) slope = 1.0;  // bounded domain: any slope works
  if (!(slope > 0.0)) return std::nullopt;
  double offset = kInf;
  for (std::size_t k = 0; k < g.values().size(); ++k)
    if (g.finite(k)) offset = std::min(offset, g[k] - slope * norm(G.point(k), dim));
  return CoercivityFit{slope, offset};
}

namespace {

struct Subset {
  std::vector<int> idx;
  std::vector<double> x;
};

Subset subset(const Axis& a, int stride) {
  Subset s;
  for (int i = 0; i < a.count; i += stride) s.idx.push_back(i);
  if (s.idx.back() != a.count - 1) s.idx.push_back(a.count - 1);
  for (int i : s.idx) s.x.push_back(a.node(i));
  return s;
}

double trapezoid_on(const Grid& G, const std::vector<double>& v, const unsigned char* mask,
                    int stride) {
  Subset s0 = subset(G.axis(0), stride);
  Subset s1;
  if (G.dim() == 2) s1 = subset(G.axis(1), stride);
  else s1 = Subset{{0}, {0.0}};
  kernels::TrapezoidArgs a{v.data(),      mask,          G.count(1),    s0.idx.data(),
                           int(s0.idx.size()), s1.idx.data(), int(s1.idx.size()), s0.x.data(),
                           s1.x.data()};
  return kernels::active::trapezoid(a);
}

Quadrature richardson(const Grid& G, const std::vector<double>& v,
                      const std::vector<unsigned char>* mask) {
  const unsigned char* m = mask ? mask->data() : nullptr;
  const double fine = trapezoid_on(G, v, m, 1);
  const double coarse = trapezoid_on(G, v, m, 2);
  return {fine, std::abs(fine - coarse) / 3.0};
}

}  // namespace

Quadrature integrate(const GridFunction& g) {
  if (!g.all_finite()) throw InvalidInput("integrand is +inf at a contributing node");
  return richardson(g.grid(), g.values(), nullptr);
}

Quadrature integrate(const GridFunction& g, const GridFunction& w) {
  if (!(g.grid() == w.grid())) throw InvalidInput("integrand and weight grids differ");
  std::vector<double> p(g.values().size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (w[k] == 0.0) continue;
    if (!g.finite(k) || !w.finite(k)) throw InvalidInput("integrand is +inf at a contributing node");
    p[k] = g[k] * w[k];
  }
  return richardson(g.grid(), p, nullptr);
}

Quadrature integrate_on_domain(const GridFunction& g, const GridFunction& domain) {
  if (!(g.grid() == domain.grid())) throw InvalidInput("integrand and domain grids differ");
  std::vector<unsigned char> mask(g.values().size());
  std::vector<double> v(g.values().size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    mask[k] = domain.finite(k) ? 1 : 0;
    if (!mask[k]) continue;
    if (!g.finite(k)) throw InvalidInput("integrand is +inf inside the domain");
    v[k] = g[k];
  }
  return richardson(g.grid(), v, &mask);
}

Gradient finite_gradient(const GridFunction& g, std::size_t node, double kink_tol) {
  const Grid& G = g.grid();
  if (!g.interior(node)) throw PreconditionError("gradient stencil leaves the finite domain");
  Gradient out;
  auto m = G.multi(node);
  const double v = g[node];
  for (int d = 0; d < G.dim(); ++d) {
    auto lo = m, hi = m;
    --lo[d];
    ++hi[d];
    const double h = G.spacing(d);
    const double fwd = (g.at(hi[0], hi[1]) - v) / h;
    const double bwd = (v - g.at(lo[0], lo[1])) / h;
    out.value[d] = 0.5 * (fwd + bwd);
    const double tol = kink_tol < 0.0 ? 10.0 * h : kink_tol;
    if (std::abs(fwd - bwd) > tol) out.differentiable = false;
  }
  return out;
}

double interpolate(const GridFunction& g, const Vec& x) {
  const Grid& G = g.grid();
  int i[2] = {0, 0};
  double t[2] = {0.0, 0.0};
  for (int d = 0; d < G.dim(); ++d) {
    const Axis& a = G.axis(d);
    const double slack = 1e-12 * (a.max - a.min);
    if (x[d] < a.min - slack || x[d] > a.max + slack)
      throw PreconditionError("interpolation point outside the grid");
    double s = (x[d] - a.min) / a.spacing();
    int c = std::clamp(int(std::floor(s)), 0, a.count - 2);
    i[d] = c;
    t[d] = std::clamp(s - c, 0.0, 1.0);
  }
  if (G.dim() == 1) {
    const double a = g.at(i[0]), b = g.at(i[0] + 1);
    if ((t[0] < 1.0 && !(a < kInf)) || (t[0] > 0.0 && !(b < kInf))) return kInf;
    if (t[0] == 0.0) return a;
    if (t[0] == 1.0) return b;
    return (1.0 - t[0]) * a + t[0] * b;
  }
  double s = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double w = (a ? t[0] : 1.0 - t[0]) * (b ? t[1] : 1.0 - t[1]);
      if (w == 0.0) continue;
      const double v = g.at(i[0] + a, i[1] + b);
      if (!(v < kInf)) return kInf;
      s += w * v;
    }
  return s;
}

}  // namespace alc
