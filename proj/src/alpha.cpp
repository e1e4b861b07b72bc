#include "alc/alpha.hpp"

#include <algorithm>
#include <cmath>

#include "alc/kernels.hpp"
#include "alc/legendre.hpp"

namespace alc {

double psi_alpha(double t, double alpha) {
  if (!(alpha < 0.0)) throw InvalidInput("alpha must be negative");
  if (t == kInf) return 0.0;
  if (std::isnan(t) || t <= 1.0 / alpha) throw PreconditionError("psi_alpha needs t > 1/alpha");
  return std::pow(1.0 - alpha * t, 1.0 / alpha);
}

AlphaConcaveFunction::AlphaConcaveFunction(double alpha, GridFunction base, bool require_nonnegative)
    : alpha_(alpha), base_(std::move(base)) {
  const int n = base_.dim();
  if (!(alpha < 0.0) || !(alpha > -1.0 / n))
    throw InvalidInput("alpha must lie in (-1/n, 0)");
  if (base_.all_infinite()) throw InvalidInput("base is identically +inf");
  for (double v : base_.values()) {
    if (!(v < kInf)) continue;
    if (v < 1.0 / alpha + 1e-12) throw InvalidInput("base must stay above 1/alpha");
    if (require_nonnegative && v < -1e-12) throw InvalidInput("base must be non-negative");
  }
}

GridFunction AlphaConcaveFunction::values() const {
  std::vector<double> v(base_.values().size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (base_.finite(k)) v[k] = psi_alpha(base_[k], alpha_);
  return GridFunction(grid(), std::move(v));
}

GridFunction AlphaConcaveFunction::density() const {
  std::vector<double> v(base_.values().size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (base_.finite(k)) v[k] = std::pow(psi_alpha(base_[k], alpha_), 1.0 - alpha_);
  return GridFunction(grid(), std::move(v));
}

std::array<std::array<double, 2>, 2> AlphaConcaveFunction::support_box() const {
  auto b = base_.finite_box();
  std::array<std::array<double, 2>, 2> out{};
  for (int d = 0; d < dim(); ++d)
    out[d] = {grid().axis(d).node(b[d][0]), grid().axis(d).node(b[d][1])};
  return out;
}

double AlphaConcaveFunction::boundary_max() const {
  const Grid& G = grid();
  double m = 0.0;
  for (std::size_t k = 0; k < G.size(); ++k) {
    if (!base_.finite(k)) continue;
    auto mi = G.multi(k);
    bool ring = false;
    for (int d = 0; d < dim(); ++d) ring = ring || mi[d] == 0 || mi[d] == G.count(d) - 1;
    if (ring) m = std::max(m, psi_alpha(base_[k], alpha_));
  }
  return m;
}

namespace {

// Gradients of grid data carry rounding from the node coordinates.
constexpr double kMergeTol = 1e-9;

void require_compatible(const AlphaConcaveFunction& f, const AlphaConcaveFunction& g) {
  if (f.alpha() != g.alpha()) throw InvalidInput("functions carry different alpha");
  if (f.dim() != g.dim()) throw InvalidInput("functions live in different dimensions");
}

std::vector<double> merged_slopes(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> s;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(s));
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Dual grid covering the slope ranges of both bases at the finer spacing.
Grid joint_dual(const GridFunction& a, const GridFunction& b, int refine) {
  Grid da = default_dual_grid(a, 0.1, refine), db = default_dual_grid(b, 0.1, refine);
  std::vector<Axis> axes;
  for (int d = 0; d < a.dim(); ++d) {
    const double lo = std::min(da.axis(d).min, db.axis(d).min);
    const double hi = std::max(da.axis(d).max, db.axis(d).max);
    const double h = std::min(da.spacing(d), db.spacing(d));
    axes.push_back(Axis{lo, hi, int(std::ceil((hi - lo) / h)) + 1});
  }
  return Grid(axes);
}

GridFunction combine_1d(const AlphaConcaveFunction& f, const AlphaConcaveFunction& g, double t) {
  ConjugateEvaluator ef(f.base()), eg(g.base());
  std::vector<double> ys = t > 0.0 ? merged_slopes(ef.slopes(), eg.slopes()) : ef.slopes();
  if (ys.empty()) throw PreconditionError("support of f is a single node");
  std::vector<double> hv(ys.size());
  for (std::size_t k = 0; k < ys.size(); ++k) {
    hv[k] = ef({ys[k], 0.0});
    if (t > 0.0) hv[k] += t * eg({ys[k], 0.0});
  }
  auto box = f.base().finite_box();
  const int count = box[0][1] - box[0][0] + 1;
  const double lo = ef.domain_min() + t * eg.domain_min();
  const double hi = ef.domain_max() + t * eg.domain_max();
  Grid out = Grid::line(lo, hi, count);
  std::vector<double> xs(count), vals(count);
  for (int i = 0; i < count; ++i) xs[i] = out.axis(0).node(i);
  std::vector<int> hull;
  kernels::lft_line(hv.data(), 1, int(ys.size()), ys.data(), xs.data(), count, vals.data(), 1,
                    nullptr, hull);
  return GridFunction(out, std::move(vals));
}

GridFunction combine_2d(const AlphaConcaveFunction& f, const AlphaConcaveFunction& g, double t,
                        int refine) {
  if (!f.base().finite_domain_is_box() || !g.base().finite_domain_is_box())
    throw PreconditionError("2D combination needs rectangular supports");
  Grid dual = joint_dual(f.base(), g.base(), refine);
  GridFunction h = conjugate(f.base(), dual).values;
  if (t > 0.0) {
    GridFunction hg = conjugate(g.base(), dual).values;
    std::vector<double> v(h.values());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += t * hg[k];
    h = GridFunction(dual, std::move(v));
  }
  auto bf = f.support_box(), bg = g.support_box();
  auto box = f.base().finite_box();
  std::vector<Axis> axes;
  for (int d = 0; d < 2; ++d)
    axes.push_back(Axis{bf[d][0] + t * bg[d][0], bf[d][1] + t * bg[d][1], box[d][1] - box[d][0] + 1});
  return conjugate(h, Grid(axes)).values;
}

}  // namespace

AlphaConcaveFunction alpha_combination(const AlphaConcaveFunction& f,
                                       const AlphaConcaveFunction& g, double t,
                                       const CombinationOptions& opt) {
  require_compatible(f, g);
  if (!std::isfinite(t) || t < 0.0) throw InvalidInput("combination weight must be >= 0");
  GridFunction base = f.dim() == 1 ? combine_1d(f, g, t) : combine_2d(f, g, t, opt.dual_refine);
  for (double v : base.values())
    if (v < kInf && v < 1.0 / f.alpha() + 1e-12)
      throw PreconditionError("combination leaves the admissible class (base below 1/alpha)");
  return AlphaConcaveFunction(f.alpha(), std::move(base));
}

Quadrature total_mass(const AlphaConcaveFunction& f) {
  return integrate_on_domain(f.values(), f.base());
}

Quadrature weighted_moment(const AlphaConcaveFunction& f, double p, int l) {
  const int n = f.dim();
  const double a = f.alpha();
  if (p < 0.0 || l < 0 || l > 2) throw InvalidInput("moment needs p >= 0 and l in {0,1,2}");
  if (!(n - l + p < -1.0 / a))
    throw HypothesisViolation("moment diverges: need n - l + p < -1/alpha");
  const GridFunction& b = f.base();
  std::vector<double> v(b.values().size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!b.finite(k)) continue;
    const double r = norm(f.grid().point(k), n);
    v[k] = (p == 0.0 ? 1.0 : std::pow(r, p)) * std::pow(1.0 - a * b[k], 1.0 / a - l);
  }
  return integrate_on_domain(GridFunction(f.grid(), std::move(v)), b);
}

NumericVariation first_variation_numeric(const AlphaConcaveFunction& f,
                                         const AlphaConcaveFunction& g, std::vector<double> steps,
                                         const CombinationOptions& opt) {
  if (steps.size() < 2) throw InvalidInput("need at least two steps");
  for (std::size_t k = 0; k < steps.size(); ++k)
    if (!(steps[k] > 0.0) || (k > 0 && !(steps[k] < steps[k - 1])))
      throw InvalidInput("steps must be positive and decreasing");
  NumericVariation out;
  out.steps = steps;
  // Reference through the same pipeline so conjugation error cancels.
  const double j0 = total_mass(alpha_combination(f, g, 0.0, opt)).value;
  for (double t : steps)
    out.quotients.push_back((total_mass(alpha_combination(f, g, t, opt)).value - j0) / t);
  const std::size_t n = steps.size();
  const double ta = steps[n - 2], tb = steps[n - 1];
  const double qa = out.quotients[n - 2], qb = out.quotients[n - 1];
  out.value = (ta * qb - tb * qa) / (ta - tb);
  return out;
}

double self_variation_formula(const AlphaConcaveFunction& f) {
  const GridFunction& b = f.base();
  GridFunction dens = f.density();
  std::vector<double> v(b.values().size(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k)
    if (b.finite(k)) v[k] = b[k] * dens[k];
  const double w = integrate_on_domain(GridFunction(f.grid(), std::move(v)), b).value;
  return f.dim() * total_mass(f).value - w;
}

std::optional<Comparability> certify_comparability(const AlphaConcaveFunction& f,
                                                   const AlphaConcaveFunction& g) {
  require_compatible(f, g);
  const int n = f.dim();
  auto bf = f.support_box(), bg = g.support_box();
  Grid dual = joint_dual(f.base(), g.base(), 1);
  GridFunction cf = conjugate(f.base(), dual).values;
  GridFunction cg = conjugate(g.base(), dual).values;
  const double scale = 1.0 + f.grid().diameter() + g.grid().diameter();
  for (int k = -6; k <= 6; ++k) {
    const double b1 = std::ldexp(1.0, k);
    bool grows = true;
    for (int d = 0; d < n; ++d)
      grows = grows && bg[d][0] >= b1 * bf[d][0] - 1e-12 * scale &&
              bg[d][1] <= b1 * bf[d][1] + 1e-12 * scale;
    if (!grows) continue;
    bool overlap = false;
    const GridFunction& gb = g.base();
    for (std::size_t q = 0; q < gb.values().size() && !overlap; ++q) {
      if (!gb.finite(q)) continue;
      const Vec x = g.grid().point(q);
      bool inside = true;
      for (int d = 0; d < n; ++d)
        inside = inside && x[d] / b1 > bf[d][0] && x[d] / b1 < bf[d][1];
      overlap = inside;
    }
    if (!overlap) continue;
    double b2 = -kInf;
    for (std::size_t q = 0; q < dual.size(); ++q) b2 = std::max(b2, cg[q] - b1 * cf[q]);
    return Comparability{b1, b2};
  }
  return std::nullopt;
}

namespace {

void require_mostly_differentiable(const GridFunction& b) {
  std::size_t interior = 0, kinks = 0;
  for (std::size_t k = 0; k < b.values().size(); ++k) {
    if (!b.interior(k)) continue;
    ++interior;
    if (!finite_gradient(b, k).differentiable) ++kinks;
  }
  if (interior > 0 && double(kinks) > 0.25 * double(interior))
    throw PreconditionError("base is nondifferentiable on too many nodes");
}

}  // namespace

FormulaVariation first_variation_formula(const AlphaConcaveFunction& f,
                                         const AlphaConcaveFunction& g) {
  auto cert = certify_comparability(f, g);
  if (!cert) throw PreconditionError("no comparability certificate for (f, g)");
  require_mostly_differentiable(f.base());
  const int n = f.dim();
  PlMesh mesh = pl_mesh(f.base(), f.alpha());
  ConjugateEvaluator eg(g.base());
  FormulaVariation out;
  out.certificate = *cert;
  std::vector<double> part(mesh.pieces.size());
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < mesh.pieces.size(); ++k)
    part[k] = eg(mesh.pieces[k].gradient) * mesh.pieces[k].mass;
  for (double p : part) out.interior += p;
  const GridFunction& gb = g.base();
  for (const Facet& fc : mesh.facets) {
    double h = -kInf;
    for (std::size_t q = 0; q < gb.values().size(); ++q)
      if (gb.finite(q)) h = std::max(h, dot(g.grid().point(q), fc.normal, n));
    out.boundary += h * fc.mass;
  }
  out.total = out.interior + out.boundary;
  return out;
}

DiscreteMeasure euclidean_sam(const AlphaConcaveFunction& f, const std::optional<Grid>& bins) {
  PlMesh mesh = pl_mesh(f.base(), f.alpha());
  DiscreteMeasure m;
  m.dim = f.dim();
  for (const Piece& p : mesh.pieces) m.add(p.gradient, p.mass);
  if (bins) return bin_measure(m, *bins);
  return m.merged(kMergeTol);
}

SphericalSam spherical_sam(const AlphaConcaveFunction& f, double negligible) {
  PlMesh mesh = pl_mesh(f.base(), f.alpha());
  SphericalSam out;
  out.measure.dim = f.dim();
  out.measure.unit = true;
  for (const Facet& fc : mesh.facets) out.measure.add(fc.normal, fc.mass);
  out.measure = out.measure.merged(kMergeTol);
  double fmax = 0.0;
  for (double v : f.values().values()) fmax = std::max(fmax, v);
  out.truncated = mesh.touches_grid_boundary && f.boundary_max() > negligible * fmax;
  return out;
}

Balance gradient_balance(const AlphaConcaveFunction& f) {
  PlMesh mesh = pl_mesh(f.base(), f.alpha());
  Balance b;
  for (const Piece& p : mesh.pieces) {
    for (int d = 0; d < f.dim(); ++d) b.interior[d] += p.gradient[d] * p.mass;
    b.scale += p.mass;
  }
  for (const Facet& fc : mesh.facets)
    for (int d = 0; d < f.dim(); ++d) b.boundary[d] += fc.normal[d] * fc.mass;
  return b;
}

}  // namespace alc
