#include "alc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace alc {

NecessaryReport check_necessary_conditions(const DiscreteMeasure& mu, double tol) {
  mu.validate();
  if (mu.size() == 0 || !(mu.total() > 0.0)) throw InvalidInput("empty measure");
  NecessaryReport r;
  const int n = mu.dim;
  r.first_moment = mu.first_moment();
  r.first_moment_finite = std::isfinite(r.first_moment);
  const Vec b = mu.barycenter();
  r.barycenter_norm = norm(b, n);
  r.diameter = mu.diameter();

  // Centred second moments; eigenvalues of the symmetric 2x2 in closed form.
  double s00 = 0.0, s01 = 0.0, s11 = 0.0;
  const double t = mu.total();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double w = mu.weights[k] / t;
    const double a = mu.points[k][0] - b[0], c = n == 2 ? mu.points[k][1] - b[1] : 0.0;
    s00 += w * a * a;
    s01 += w * a * c;
    s11 += w * c * c;
  }
  std::vector<double> ev;
  if (n == 1) {
    ev = {s00};
  } else {
    const double m = 0.5 * (s00 + s11), d = std::hypot(0.5 * (s00 - s11), s01);
    ev = {m + d, m - d};
  }
  const double top = *std::max_element(ev.begin(), ev.end());
  r.affine_hull_dim = 0;
  for (double e : ev)
    if (top > 0.0 && e > 1e-10 * top) ++r.affine_hull_dim;

  if (!r.first_moment_finite) r.reason = "first moment is not finite";
  else if (r.affine_hull_dim < n) r.reason = "support in hyperplane";
  else if (r.barycenter_norm > tol * r.diameter) r.reason = "barycenter is not at the origin";
  r.pass = r.reason.empty();
  return r;
}

IntegrabilityReport check_integrability_trend(const AlphaConcaveFunction& f, double p, int l,
                                              const std::vector<double>& extents) {
  const int n = f.dim();
  const double a = f.alpha();
  if (!(n - l + p < -1.0 / a))
    throw HypothesisViolation("integrability needs n - l + p < -1/alpha");
  if (extents.size() < 3) throw InvalidInput("need at least three nested boxes");
  const Grid& G = f.grid();
  const GridFunction& phi = f.base();
  std::vector<double> integrand(G.size(), 0.0);
  for (std::size_t k = 0; k < G.size(); ++k) {
    if (!phi.finite(k)) continue;
    const Vec x = G.point(k);
    integrand[k] = std::pow(norm(x, n), p) * std::pow(1.0 - a * phi[k], 1.0 / a - l);
  }
  GridFunction g(G, integrand);

  IntegrabilityReport r;
  r.extents = extents;
  for (double R : extents) {
    std::vector<double> mask(G.size(), kInf);
    const double slack = 1e-9 * G.max_spacing();
    for (std::size_t k = 0; k < G.size(); ++k) {
      const Vec x = G.point(k);
      bool in = true;
      for (int d = 0; d < n; ++d) in = in && std::abs(x[d]) <= R + slack;
      if (in) mask[k] = 0.0;
    }
    r.partial.push_back(integrate_on_domain(g, GridFunction(G, mask)).value);
  }
  for (std::size_t k = 0; k + 1 < r.partial.size(); ++k)
    r.increments.push_back(r.partial[k + 1] - r.partial[k]);
  r.pass = true;
  for (std::size_t k = 0; k + 1 < r.increments.size(); ++k) {
    const double q = r.increments[k] > 0.0 ? r.increments[k + 1] / r.increments[k] : kInf;
    r.ratios.push_back(q);
    if (!(q < 1.0)) r.pass = false;
  }
  return r;
}

BalanceReport check_gradient_balance(const AlphaConcaveFunction& f, unsigned long seed) {
  const int n = f.dim();
  Balance b = gradient_balance(f);
  BalanceReport r;
  r.interior = b.interior;
  r.boundary = b.boundary;
  r.scale = b.scale;
  for (int d = 0; d < n; ++d)
    for (double s : {1.0, -1.0}) {
      Vec u{0.0, 0.0};
      u[d] = s;
      r.directions.push_back(u);
    }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 8; ++k) {
    Vec u{g(rng), n == 2 ? g(rng) : 0.0};
    const double len = norm(u, n);
    if (len == 0.0) u = {1.0, 0.0};
    else u = {u[0] / len, u[1] / len};
    r.directions.push_back(u);
  }
  const Vec sum{b.interior[0] + b.boundary[0], b.interior[1] + b.boundary[1]};
  for (const Vec& u : r.directions) {
    const double res = std::abs(dot(u, sum, n));
    r.residuals.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  r.pass = r.max_residual <= 1e-3 * r.scale;
  return r;
}

}  // namespace alc
