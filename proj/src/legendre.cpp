#include "alc/legendre.hpp"

#include <algorithm>
#include <cmath>

#include "alc/kernels.hpp"

namespace alc {

namespace {

std::vector<double> nodes(const Axis& a) {
  std::vector<double> x(a.count);
  for (int i = 0; i < a.count; ++i) x[i] = a.node(i);
  return x;
}

}  // namespace

Grid default_dual_grid(const GridFunction& phi, double pad, int refine) {
  const Grid& G = phi.grid();
  if (phi.all_infinite()) throw PreconditionError("function is identically +inf");
  std::vector<Axis> axes;
  for (int d = 0; d < G.dim(); ++d) {
    double lo = kInf, hi = -kInf;
    const double h = G.spacing(d);
    for (std::size_t k = 0; k < G.size(); ++k) {
      auto m = G.multi(k);
      if (m[d] + 1 >= G.count(d)) continue;
      auto n = m;
      ++n[d];
      const std::size_t kn = G.index(n[0], n[1]);
      if (!phi.finite(k) || !phi.finite(kn)) continue;
      const double s = (phi[kn] - phi[k]) / h;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (lo > hi) lo = hi = 0.0;  // single finite node along this axis
    double w = hi - lo;
    if (w <= 0.0) w = std::max(1.0, std::abs(lo)) / pad * 0.5;
    axes.push_back(Axis{lo - pad * w, hi + pad * w, (G.count(d) - 1) * refine + 1});
  }
  return Grid(axes);
}

Conjugate conjugate(const GridFunction& phi, const Grid& dual) {
  const Grid& G = phi.grid();
  if (dual.dim() != G.dim()) throw InvalidInput("dual grid dimension mismatch");
  if (phi.all_infinite()) throw PreconditionError("function is identically +inf");
  const std::vector<double> x0 = nodes(G.axis(0));
  const std::vector<double> y0 = nodes(dual.axis(0));
  const int n0 = G.count(0), n1 = G.count(1);
  const int m0 = dual.count(0), m1 = dual.count(1);

  std::vector<double> out(dual.size());
  std::vector<std::size_t> argmax(dual.size());
  if (G.dim() == 1) {
    std::vector<int> arg(m0);
    kernels::LftArgs a{phi.values().data(), 0, 1, 1, n0, x0.data(), y0.data(), m0,
                       out.data(),          0, 1, arg.data()};
    kernels::active::lft_rows(a);
    for (int j = 0; j < m0; ++j) argmax[j] = std::size_t(arg[j]);
  } else {
    // Stage 1: sweep axis 0 for every column of fixed x1.
    std::vector<double> H(std::size_t(m0) * n1);
    std::vector<int> arg0(H.size());
    kernels::LftArgs s1{phi.values().data(), 1, n1, n1, n0, x0.data(), y0.data(), m0,
                        H.data(),            1, n1, arg0.data()};
    kernels::active::lft_rows(s1);
    // Stage 2: sweep axis 1 on -H; empty columns carry +inf.
    for (double& v : H) v = -v;
    const std::vector<double> x1 = nodes(G.axis(1));
    const std::vector<double> y1 = nodes(dual.axis(1));
    std::vector<int> arg1(dual.size());
    kernels::LftArgs s2{H.data(), n1, 1, m0, n1, x1.data(), y1.data(), m1,
                        out.data(), m1, 1, arg1.data()};
    kernels::active::lft_rows(s2);
    for (int j0 = 0; j0 < m0; ++j0)
      for (int j1 = 0; j1 < m1; ++j1) {
        const std::size_t k = std::size_t(j0) * m1 + j1;
        const int i1 = arg1[k];
        const int i0 = arg0[std::size_t(j0) * n1 + i1];
        argmax[k] = G.index(i0, i1);
      }
  }
  return Conjugate{GridFunction(dual, std::move(out)), std::move(argmax)};
}

Conjugate conjugate(const GridFunction& phi) { return conjugate(phi, default_dual_grid(phi)); }

GridFunction biconjugate(const GridFunction& phi, const Grid& primal, const Grid& dual) {
  Conjugate c = conjugate(phi, dual);
  return conjugate(c.values, primal).values;
}

GridFunction biconjugate(const GridFunction& phi) {
  return biconjugate(phi, phi.grid(), default_dual_grid(phi));
}

double fenchel_young_residual(const GridFunction& phi, const GridFunction& phistar,
                              std::size_t node) {
  Gradient g = finite_gradient(phi, node);
  if (!g.differentiable) throw PreconditionError("node is not a differentiability point");
  const double s = interpolate(phistar, g.value);
  if (!(s < kInf)) throw PreconditionError("conjugate is +inf at the gradient");
  const int dim = phi.dim();
  return std::abs(s + phi[node] - dot(phi.grid().point(node), g.value, dim));
}

bool subgradient_contains(const GridFunction& phi, std::size_t x0, const Vec& y, double tol) {
  if (!phi.finite(x0)) return false;
  const Grid& G = phi.grid();
  const int dim = G.dim();
  const Vec p0 = G.point(x0);
  for (std::size_t k = 0; k < G.size(); ++k) {
    if (!phi.finite(k)) continue;
    const Vec p = G.point(k);
    const Vec d{p[0] - p0[0], p[1] - p0[1]};
    if (phi[k] < phi[x0] + dot(y, d, dim) - tol * (1.0 + std::abs(phi[k]))) return false;
  }
  return true;
}

ConjugateEvaluator::ConjugateEvaluator(const GridFunction& phi) : phi_(phi) {
  const Grid& G = phi_.grid();
  if (phi_.all_infinite()) throw PreconditionError("function is identically +inf");
  const int rows = G.dim() == 1 ? 1 : G.count(0);
  const int len = G.dim() == 1 ? G.count(0) : G.count(1);
  xs1_ = nodes(G.axis(G.dim() - 1));
  rows_.resize(rows);
  slopes_.resize(rows);
  std::vector<int> hull;
  for (int r = 0; r < rows; ++r) {
    const double* v = phi_.values().data() + std::size_t(r) * len;
    // Reuse the kernel hull by transforming with no queries.
    kernels::lft_line(v, 1, len, xs1_.data(), nullptr, 0, nullptr, 1, nullptr, hull);
    rows_[r].hull = hull;
    auto& s = slopes_[r];
    for (std::size_t k = 0; k + 1 < hull.size(); ++k)
      s.push_back((v[hull[k + 1]] - v[hull[k]]) / (xs1_[hull[k + 1]] - xs1_[hull[k]]));
  }
}

double ConjugateEvaluator::operator()(const Vec& y, std::size_t* arg) const {
  const Grid& G = phi_.grid();
  const bool two = G.dim() == 2;
  const double yi = two ? y[1] : y[0];
  const int len = two ? G.count(1) : G.count(0);
  double best = -kInf;
  std::size_t barg = 0;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& h = rows_[r].hull;
    if (h.empty()) continue;
    const auto& s = slopes_[r];
    const std::size_t p = std::lower_bound(s.begin(), s.end(), yi) - s.begin();
    const int c = h[p];
    const std::size_t k = r * len + c;
    double v = xs1_[c] * yi - phi_[k];
    if (two) v += G.axis(0).node(int(r)) * y[0];
    if (v > best) {
      best = v;
      barg = k;
    }
  }
  if (arg) *arg = barg;
  return best;
}

double ConjugateEvaluator::domain_min() const { return xs1_[rows_[0].hull.front()]; }
double ConjugateEvaluator::domain_max() const { return xs1_[rows_[0].hull.back()]; }

}  // namespace alc
