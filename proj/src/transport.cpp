#include "alc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alc/kernels.hpp"
#include "alc/legendre.hpp"
#include "alc/simplex.hpp"

namespace alc {

std::vector<double> TransportPlan::row_sums() const {
  std::vector<double> r(n, 0.0);
  for (std::size_t k = 0; k < size(); ++k) r[rows[k]] += weights[k];
  return r;
}

std::vector<double> TransportPlan::col_sums() const {
  std::vector<double> c(m, 0.0);
  for (std::size_t k = 0; k < size(); ++k) c[cols[k]] += weights[k];
  return c;
}

namespace {

constexpr double kMassTol = 1e-9;

void check_pair(const DiscreteMeasure& rho, const DiscreteMeasure& mu) {
  rho.validate();
  mu.validate();
  if (rho.dim != mu.dim) throw InvalidInput("measures live in different dimensions");
  const double a = rho.total(), b = mu.total();
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("transport needs nonempty supports");
  if (std::abs(a - b) > kMassTol * std::max(a, b))
    throw PreconditionError("measures must have equal total mass");
}

// Atoms with positive weight, packed for the kernels.
struct Packed {
  std::vector<int> index;
  std::vector<double> w;
  std::vector<double> xy;
};

Packed pack(const DiscreteMeasure& m) {
  Packed p;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m.weights[k] <= 0.0) continue;
    p.index.push_back(int(k));
    p.w.push_back(m.weights[k]);
    for (int d = 0; d < m.dim; ++d) p.xy.push_back(m.points[k][d]);
  }
  return p;
}

std::vector<double> correlation_cost(const Packed& x, const Packed& y, int dim) {
  std::vector<double> c(x.w.size() * y.w.size());
  kernels::active::correlation_cost(x.xy.data(), int(x.w.size()), y.xy.data(), int(y.w.size()),
                                    dim, c.data());
  return c;
}

std::size_t lexicographic_min(const DiscreteMeasure& m, const std::vector<int>& idx) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < idx.size(); ++k)
    if (m.points[idx[k]] < m.points[idx[best]]) best = k;
  return best;
}

}  // namespace

ExactTransport max_correlation_exact(const DiscreteMeasure& rho, const DiscreteMeasure& mu) {
  check_pair(rho, mu);
  const int dim = rho.dim;
  Packed x = pack(rho), y = pack(mu);
  const std::size_t n = x.w.size(), m = y.w.size();
  std::vector<double> cost = correlation_cost(x, y, dim);
  SimplexResult s = network_simplex(x.w, y.w, cost);

  // Potentials: c_ij >= v_j - u_i gives <x_i,y_j> <= u_i - v_j. Polish with a
  // double c-transform so the dual constraints hold exactly as computed.
  std::vector<double> phi(s.u), psi(m);
  for (std::size_t j = 0; j < m; ++j) {
    double best = -kInf;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, -cost[i * m + j] - phi[i]);
    psi[j] = best;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double best = -kInf;
    for (std::size_t j = 0; j < m; ++j) best = std::max(best, -cost[i * m + j] - psi[j]);
    phi[i] = best;
  }
  const double shift = phi[lexicographic_min(rho, x.index)];
  for (double& v : phi) v -= shift;
  for (double& v : psi) v += shift;

  ExactTransport out;
  out.pivots = s.pivots;
  out.plan.n = rho.size();
  out.plan.m = mu.size();
  for (const auto& e : s.flow) {
    out.plan.rows.push_back(x.index[e.i]);
    out.plan.cols.push_back(y.index[e.j]);
    out.plan.weights.push_back(e.x);
    out.value += e.x * -cost[std::size_t(e.i) * m + e.j];
  }
  out.potentials.phi.assign(rho.size(), 0.0);
  out.potentials.phi_star.assign(mu.size(), 0.0);
  // Zero-weight atoms get the transform values too.
  for (std::size_t k = 0; k < rho.size(); ++k) {
    double best = -kInf;
    for (std::size_t j = 0; j < m; ++j)
      best = std::max(best, dot(rho.points[k], mu.points[y.index[j]], dim) - psi[j]);
    out.potentials.phi[k] = best;
  }
  for (std::size_t i = 0; i < n; ++i) out.potentials.phi[x.index[i]] = phi[i];
  for (std::size_t k = 0; k < mu.size(); ++k) {
    double best = -kInf;
    for (std::size_t i = 0; i < n; ++i)
      best = std::max(best, dot(rho.points[x.index[i]], mu.points[k], dim) - phi[i]);
    out.potentials.phi_star[k] = best;
  }
  for (std::size_t j = 0; j < m; ++j) out.potentials.phi_star[y.index[j]] = psi[j];

  for (std::size_t i = 0; i < n; ++i) out.dual += x.w[i] * phi[i];
  for (std::size_t j = 0; j < m; ++j) out.dual += y.w[j] * psi[j];
  out.potentials.duality_gap = std::abs(out.dual - out.value);
  return out;
}

EntropicTransport max_correlation_entropic(const DiscreteMeasure& rho, const DiscreteMeasure& mu,
                                           double epsilon, int max_iter) {
  check_pair(rho, mu);
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  const int dim = rho.dim;
  Packed x = pack(rho), y = pack(mu);
  const int n = int(x.w.size()), m = int(y.w.size());
  std::vector<double> cost = correlation_cost(x, y, dim);
  const double total = std::accumulate(x.w.begin(), x.w.end(), 0.0);

  std::vector<double> la(n), lb(m);
  for (int i = 0; i < n; ++i) la[i] = std::log(x.w[i]);
  for (int j = 0; j < m; ++j) lb[j] = std::log(y.w[j]);

  double cmin = kInf, cmax = -kInf;
  for (double c : cost) {
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  double eps = std::max(epsilon, cmax - cmin);

  std::vector<double> f(n, 0.0), g(m, 0.0);
  auto row_step = [&](double e) {
    kernels::active::sinkhorn_half({cost.data(), m, 1, n, m, g.data(), la.data(), e, f.data()});
  };
  auto col_step = [&](double e) {
    kernels::active::sinkhorn_half({cost.data(), 1, m, m, n, f.data(), lb.data(), e, g.data()});
  };
  // After a column step the columns are exact; measure the row violation.
  auto row_error = [&](double e) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += std::exp((f[i] + g[j] - cost[std::size_t(i) * m + j]) / e);
      err += std::abs(s - x.w[i]);
    }
    return err;
  };

  int it = 0;
  double err = kInf;
  for (;;) {
    const bool last = eps <= epsilon;
    const double target = (last ? 1e-9 : 1e-4) * total;
    for (;;) {
      row_step(eps);
      col_step(eps);
      ++it;
      if (it % 10 == 0 || last) {
        err = row_error(eps);
        if (err <= target) break;
      }
      if (it >= max_iter)
        throw NonConvergence("Sinkhorn iteration did not reach the marginal tolerance");
    }
    if (last) break;
    eps = std::max(epsilon, 0.5 * eps);
  }

  // Rounding onto the transport polytope.
  std::vector<double> P(std::size_t(n) * m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      P[std::size_t(i) * m + j] = std::exp((f[i] + g[j] - cost[std::size_t(i) * m + j]) / eps);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += P[std::size_t(i) * m + j];
    if (s > x.w[i])
      for (int j = 0; j < m; ++j) P[std::size_t(i) * m + j] *= x.w[i] / s;
  }
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += P[std::size_t(i) * m + j];
    if (s > y.w[j])
      for (int i = 0; i < n; ++i) P[std::size_t(i) * m + j] *= y.w[j] / s;
  }
  std::vector<double> er(n), ec(m);
  double norm_r = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m; ++j) s += P[std::size_t(i) * m + j];
    er[i] = std::max(0.0, x.w[i] - s);
    norm_r += er[i];
  }
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += P[std::size_t(i) * m + j];
    ec[j] = std::max(0.0, y.w[j] - s);
  }
  if (norm_r > 0.0)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) P[std::size_t(i) * m + j] += er[i] * ec[j] / norm_r;

  EntropicTransport out;
  out.phi_star.assign(mu.size(), 0.0);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    double best = -kInf;
    for (int i = 0; i < n; ++i)
      best = std::max(best, dot(rho.points[x.index[i]], mu.points[k], dim) + f[i]);
    out.phi_star[k] = best;
  }
  for (int j = 0; j < m; ++j) out.phi_star[y.index[j]] = -g[j];
  out.epsilon = eps;
  out.bound = eps * std::log(double(n) * double(m));
  out.marginal_error = err;
  out.iterations = it;
  out.plan.n = rho.size();
  out.plan.m = mu.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double p = P[std::size_t(i) * m + j];
      if (p <= 0.0) continue;
      out.plan.rows.push_back(x.index[i]);
      out.plan.cols.push_back(y.index[j]);
      out.plan.weights.push_back(p);
      out.value += p * -cost[std::size_t(i) * m + j];
    }
  return out;
}

std::vector<KnottSmithViolation> knott_smith_check(const TransportPlan& plan,
                                                   const PotentialPair& pot,
                                                   const DiscreteMeasure& rho,
                                                   const DiscreteMeasure& mu, double tol) {
  if (pot.phi.size() != rho.size() || pot.phi_star.size() != mu.size())
    throw InvalidInput("potentials do not match the measures");
  std::vector<KnottSmithViolation> out;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    if (plan.weights[k] <= 0.0) continue;
    const int i = plan.rows[k], j = plan.cols[k];
    if (!std::isfinite(pot.phi[i])) throw PreconditionError("potential is infinite on the support");
    const double slack = pot.phi[i] + pot.phi_star[j] - dot(rho.points[i], mu.points[j], rho.dim);
    if (std::abs(slack) > tol) out.push_back({i, j, slack});
  }
  return out;
}

std::vector<KnottSmithViolation> knott_smith_check(const TransportPlan& plan,
                                                   const GridFunction& phi,
                                                   const DiscreteMeasure& rho,
                                                   const DiscreteMeasure& mu, double tol) {
  const Grid& G = phi.grid();
  if (G.dim() != rho.dim || rho.dim != mu.dim) throw InvalidInput("dimension mismatch");
  ConjugateEvaluator star(phi);
  std::vector<KnottSmithViolation> out;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    if (plan.weights[k] <= 0.0) continue;
    const int i = plan.rows[k], j = plan.cols[k];
    const Vec& x = rho.points[i];
    int idx[2] = {0, 0};
    for (int d = 0; d < G.dim(); ++d) {
      const Axis& a = G.axis(d);
      idx[d] = std::clamp(int(std::lround((x[d] - a.min) / a.spacing())), 0, a.count - 1);
    }
    const std::size_t node = G.index(idx[0], idx[1]);
    if (!phi.finite(node)) throw PreconditionError("potential is infinite on the support");
    if (subgradient_contains(phi, node, mu.points[j], tol)) continue;
    const Vec xn = G.point(node);
    out.push_back({i, j, phi[node] + star(mu.points[j]) - dot(xn, mu.points[j], G.dim())});
  }
  return out;
}

FirstMomentBound first_moment_bound_constant(const DiscreteMeasure& mu, int directions) {
  mu.validate();
  if (mu.size() == 0 || !(mu.total() > 0.0)) throw InvalidInput("empty measure");
  if (directions < 1) throw InvalidInput("need at least one direction");
  const int n = mu.dim;
  DiscreteMeasure p = mu.merged(0.0);
  if (p.size() < 2) throw PreconditionError("single-atom measure: the constant degenerates to 0");

  const int K = n == 1 ? 1 : directions;
  const double pi = std::acos(-1.0);
  FirstMomentBound best;
  best.value = kInf;
  best.directions = K;
  std::vector<std::pair<double, double>> proj(p.size());
  for (int k = 0; k < K; ++k) {
    const double th = pi * k / K;
    const Vec e = n == 1 ? Vec{1.0, 0.0} : Vec{std::cos(th), std::sin(th)};
    for (std::size_t a = 0; a < p.size(); ++a) proj[a] = {dot(p.points[a], e, n), p.weights[a]};
    std::sort(proj.begin(), proj.end());
    // Weighted median: first value where the cumulative weight reaches half.
    const double half = 0.5 * p.total();
    double acc = 0.0, l = proj.back().first;
    for (auto& [v, w] : proj) {
      acc += w;
      if (acc >= half) {
        l = v;
        break;
      }
    }
    double s = 0.0;
    for (auto& [v, w] : proj) s += w * std::abs(v - l);
    const double c = s / (2.0 * n);
    if (c < best.value) {
      best.value = c;
      best.direction = e;
      best.offset = l;
    }
  }
  const double margin = n == 1 ? 0.0 : (pi / (2.0 * K)) * mu.first_moment() / (2.0 * n);
  best.certified = std::max(0.0, best.value - margin);
  return best;
}

BermanCheck berman_derivative_check(const GridFunction& phi, const GridFunction& g, const Vec& y,
                                    std::vector<double> steps) {
  if (phi.grid() != g.grid()) throw InvalidInput("phi and g must share a grid");
  if (steps.size() < 2) throw InvalidInput("need at least two steps");
  const Grid& G = phi.grid();
  const int dim = G.dim();
  ConjugateEvaluator base(phi);
  std::size_t arg = 0;
  const double v0 = base(y, &arg);
  if (!std::isfinite(v0)) throw PreconditionError("conjugate is not finite at y");
  // The maximiser must be stable under tiny perturbations of y.
  const double d = 1e-9 * (1.0 + norm(y, dim));
  for (int k = 0; k < dim; ++k)
    for (double s : {-d, d}) {
      Vec z = y;
      z[k] += s;
      std::size_t a2 = 0;
      base(z, &a2);
      if (a2 != arg) throw PreconditionError("conjugate is not differentiable at y");
    }
  if (!g.finite(arg)) throw PreconditionError("g is infinite at the maximising node");

  BermanCheck out;
  out.steps = steps;
  out.gradient = G.point(arg);
  out.predicted = -g[arg];
  for (double t : steps) {
    std::vector<double> v(G.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = phi[k] + t * g[k];
    ConjugateEvaluator pert(GridFunction(G, std::move(v)));
    out.quotients.push_back((pert(y) - v0) / t);
  }
  const std::size_t L = steps.size();
  const double r = steps[L - 2] / steps[L - 1];
  out.derivative = (r * out.quotients[L - 1] - out.quotients[L - 2]) / (r - 1.0);
  out.residual = std::abs(out.derivative - out.predicted);
  return out;
}

double wasserstein1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  check_pair(a, b);
  Packed x = pack(a), y = pack(b);
  const std::size_t n = x.w.size(), m = y.w.size();
  std::vector<double> cost(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      cost[i * m + j] = dist(a.points[x.index[i]], b.points[y.index[j]], a.dim);
  return network_simplex(x.w, y.w, cost).cost;
}

}  // namespace alc
