#include "alc/minkowski.hpp"

#include <algorithm>
#include <cmath>

#include "alc/alpha.hpp"
#include "alc/verify.hpp"

namespace alc {

namespace {

const double kPi = std::acos(-1.0);

double ball_volume(int n) { return n == 1 ? 2.0 : kPi; }

DiscreteMeasure node_measure(const Grid& G, const std::vector<double>& w,
                             const std::vector<double>& d, const DiscreteMeasure& atoms) {
  DiscreteMeasure m;
  m.dim = G.dim();
  m.points.reserve(G.size() + atoms.size());
  m.weights.reserve(G.size() + atoms.size());
  for (std::size_t k = 0; k < G.size(); ++k) m.add(G.point(k), w[k] * d[k]);
  for (std::size_t k = 0; k < atoms.size(); ++k) m.add(atoms.points[k], atoms.weights[k]);
  return m;
}

double f_alpha_nodes(const std::vector<double>& w, const std::vector<double>& d, double alpha) {
  const double q = 1.0 / (1.0 - alpha);
  double s = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] > 0.0) s += w[k] * std::pow(d[k], q);
  return -s;
}

// One transport evaluation: value of T plus potentials on all grid nodes.
struct Linearization {
  double T = 0.0;
  std::vector<double> phi;  // on grid nodes, c-transform of the target potential
  TransportPlan plan;
};

Linearization linearize(const Grid& G, const DiscreteMeasure& rho, const DiscreteMeasure& mu,
                        const SolveConfig& cfg) {
  Linearization L;
  std::vector<double> psi;
  if (cfg.backend == "entropic") {
    EntropicTransport e = max_correlation_entropic(rho, mu, cfg.epsilon);
    L.T = e.value;
    L.plan = std::move(e.plan);
    psi = std::move(e.phi_star);
  } else if (cfg.backend == "exact") {
    ExactTransport e = max_correlation_exact(rho, mu);
    L.T = e.value;
    L.plan = std::move(e.plan);
    psi = std::move(e.potentials.phi_star);
  } else {
    throw InvalidInput("unknown transport backend: " + cfg.backend);
  }
  // phi(x) = max_j <x, y_j> - psi_j: convex, finite on the whole grid.
  const int n = G.dim();
  L.phi.assign(G.size(), -kInf);
  for (std::size_t k = 0; k < G.size(); ++k) {
    const Vec x = G.point(k);
    double best = -kInf;
    for (std::size_t j = 0; j < mu.size(); ++j)
      if (mu.weights[j] > 0.0) best = std::max(best, dot(x, mu.points[j], n) - psi[j]);
    L.phi[k] = best;
  }
  return L;
}

// Mass of (-c - alpha phi)^{(1-alpha)/alpha}; +inf when some node has -c - alpha phi <= 0.
double candidate_mass(const std::vector<double>& w, const std::vector<double>& phi, double alpha,
                      double c) {
  const double e = (1.0 - alpha) / alpha;
  double s = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double b = -c - alpha * phi[k];
    if (b <= 0.0) return kInf;
    s += w[k] * std::pow(b, e);
  }
  return s;
}

// Largest c < 0 with mass(c) <= 1 found by bisection; returns c and
// the normalised candidate density.
double solve_c(const std::vector<double>& w, const std::vector<double>& phi, double alpha,
               std::vector<double>& d) {
  double lo = -1.0;
  while (candidate_mass(w, phi, alpha, lo) >= 1.0) lo *= 2.0;
  double hi = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (candidate_mass(w, phi, alpha, mid) >= 1.0) hi = mid;
    else lo = mid;
  }
  const double c = lo;
  const double e = (1.0 - alpha) / alpha;
  d.resize(phi.size());
  double mass = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    d[k] = std::pow(-c - alpha * phi[k], e);
    mass += w[k] * d[k];
  }
  for (double& v : d) v /= mass;
  return c;
}

// Integer-cell shift bringing the barycenter of the nodal density to the
// origin cell; entering nodes copy the edge value. Returns false when no shift is needed.
bool recentered(const Grid& G, const std::vector<double>& w, const std::vector<double>& d,
                std::vector<double>& out) {
  const int n = G.dim();
  Vec b{0.0, 0.0};
  double mass = 0.0;
  for (std::size_t k = 0; k < G.size(); ++k) {
    const Vec x = G.point(k);
    const double m = w[k] * d[k];
    mass += m;
    for (int a = 0; a < n; ++a) b[a] += m * x[a];
  }
  int s[2] = {0, 0};
  bool any = false;
  for (int a = 0; a < n; ++a) {
    const Axis& ax = G.axis(a);
    const double centre = 0.5 * (ax.min + ax.max);
    s[a] = int(std::lround((b[a] / mass - centre) / ax.spacing()));
    any = any || s[a] != 0;
  }
  if (!any) return false;
  out.assign(G.size(), 0.0);
  const int n0 = G.count(0), n1 = G.count(1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const int si = std::clamp(i + s[0], 0, n0 - 1), sj = std::clamp(j + s[1], 0, n1 - 1);
      out[G.index(i, j)] = d[G.index(si, sj)];
    }
  double m2 = 0.0;
  for (std::size_t k = 0; k < G.size(); ++k) m2 += w[k] * out[k];
  for (double& v : out) v /= m2;
  return true;
}

Grid default_grid(const DiscreteMeasure& mu) {
  double r = 0.0;
  for (const Vec& y : mu.points) r = std::max(r, norm(y, mu.dim));
  const double R = 20.0 * r;
  return mu.dim == 1 ? Grid::line(-R, R, 801) : Grid::square(-R, R, 61);
}

}  // namespace

std::vector<double> node_weights(const Grid& g) {
  std::vector<double> w(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto mi = g.multi(k);
    double v = 1.0;
    for (int d = 0; d < g.dim(); ++d) {
      const bool end = mi[d] == 0 || mi[d] == g.count(d) - 1;
      v *= g.spacing(d) * (end ? 0.5 : 1.0);
    }
    w[k] = v;
  }
  return w;
}

double AlphaConcaveMeasure::density_mass() const {
  const auto w = node_weights(density.grid());
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * density[k];
  return s;
}

DiscreteMeasure AlphaConcaveMeasure::discretized() const {
  return node_measure(density.grid(), node_weights(density.grid()), density.values(), atoms);
}

double f_alpha(const GridFunction& density, double alpha) {
  for (double v : density.values())
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("density must be finite and non-negative");
  return f_alpha_nodes(node_weights(density.grid()), density.values(), alpha);
}

double FAlphaLowerBound::operator()(double moment) const {
  return c1 + c2 - std::pow(moment, a1) - std::pow(moment, a2);
}

FAlphaLowerBound f_alpha_lower_bound(double alpha, int n, double a1, double a2) {
  if (!(alpha > -1.0 / n && alpha < 0.0)) throw InvalidInput("alpha out of range");
  const double k = -alpha * n;
  if (!(a1 > 0.0 && a1 < k && a2 > k && a2 < 1.0)) throw InvalidInput("exponents out of range");
  const double beta = -alpha * std::pow(1.0 - alpha, 1.0 / alpha - 1.0);
  // Radial integrals of |x|^s: n w_n / (s + n) inside, n w_n / (-s - n) outside.
  const double area = n * ball_volume(n);
  FAlphaLowerBound b;
  b.a1 = a1;
  b.a2 = a2;
  b.c1 = -beta * area / (a1 / alpha + n);
  b.c2 = -beta * area / (-a2 / alpha - n);
  return b;
}

double objective(const GridFunction& density, const DiscreteMeasure& atoms, double alpha,
                 const DiscreteMeasure& mu) {
  const Grid& G = density.grid();
  const auto w = node_weights(G);
  const double F = f_alpha(density, alpha);
  const double T = max_correlation_exact(node_measure(G, w, density.values(), atoms), mu).value;
  return (1.0 - alpha) * F - alpha * T;
}

double objective(const AlphaConcaveMeasure& rho, const DiscreteMeasure& mu) {
  return objective(rho.density, rho.atoms, rho.alpha, mu);
}

DiscreteMeasure solution_sam(const AlphaConcaveMeasure& m, double total) {
  AlphaConcaveFunction f(m.alpha, m.base);
  DiscreteMeasure s = euclidean_sam(f);
  const double t = s.total();
  for (double& v : s.weights) v *= total / t;
  return s;
}

SolveResult solve(const DiscreteMeasure& mu_in, const SolveConfig& cfg) {
  const double alpha = cfg.alpha;
  const int n = mu_in.dim;
  if (!(alpha > -1.0 / n && alpha < 0.0)) throw InvalidInput("alpha must lie in (-1/n, 0)");
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0)) throw InvalidInput("theta must lie in (0, 1]");
  if (cfg.max_iter < 1) throw InvalidInput("maxIter must be positive");
  NecessaryReport nec = check_necessary_conditions(mu_in);
  if (!nec.pass) throw PreconditionError(nec.reason);
  const DiscreteMeasure mu = mu_in.normalized();
  const Grid G = cfg.grid ? *cfg.grid : default_grid(mu);
  if (G.dim() != n) throw InvalidInput("grid and measure dimensions differ");
  const std::vector<double> w = node_weights(G);
  const DiscreteMeasure no_atoms{n, {}, {}, false};

  // Uniform ball with tau^{1 + alpha n/(1 - alpha)} at half the admissible bound.
  const double expo = 1.0 + alpha * n / (1.0 - alpha);
  const double bound = (1.0 - alpha) * std::pow(ball_volume(n), -alpha / (1.0 - alpha)) /
                       (-alpha * mu.first_moment());
  double tau = std::pow(0.5 * bound, 1.0 / expo);
  double half_width = kInf;
  for (int a = 0; a < n; ++a)
    half_width = std::min(half_width, 0.5 * (G.axis(a).max - G.axis(a).min));
  tau = std::clamp(tau, 2.0 * G.max_spacing(), 0.5 * half_width);
  std::vector<double> d(G.size(), 0.0);
  {
    Vec c{0.0, 0.0};
    for (int a = 0; a < n; ++a) c[a] = 0.5 * (G.axis(a).min + G.axis(a).max);
    double m = 0.0;
    for (std::size_t k = 0; k < G.size(); ++k)
      if (dist(G.point(k), c, n) <= tau) {
        d[k] = 1.0;
        m += w[k];
      }
    for (double& v : d) v /= m;
  }

  auto evaluate = [&](const std::vector<double>& dens, Linearization& L) {
    L = linearize(G, node_measure(G, w, dens, no_atoms), mu, cfg);
    return (1.0 - alpha) * f_alpha_nodes(w, dens, alpha) - alpha * L.T;
  };

  SolveResult res;
  SolveReport& rep = res.report;
  Linearization L;
  double obj = evaluate(d, L);
  rep.comparison_objective = obj;
  rep.objective_trace.push_back(obj);

  std::vector<double> cand, trial, shifted;
  double c = 0.0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    rep.iterations = it + 1;
    const double lo = *std::min_element(L.phi.begin(), L.phi.end());
    for (double& v : L.phi) v -= lo;
    c = solve_c(w, L.phi, alpha, cand);
    rep.c0_trace.push_back(c);

    double theta = cfg.theta;
    bool accepted = false;
    Linearization Ln;
    double next = obj;
    const double slack = 1e-12 * (1.0 + std::abs(obj));
    for (int halving = 0; halving < 30 && !accepted; ++halving) {
      trial.resize(d.size());
      for (std::size_t k = 0; k < d.size(); ++k) trial[k] = (1.0 - theta) * d[k] + theta * cand[k];
      if (recentered(G, w, trial, shifted)) {
        next = evaluate(shifted, Ln);
        if (next <= obj + slack) {
          trial.swap(shifted);
          accepted = true;
          break;
        }
      }
      next = evaluate(trial, Ln);
      if (next <= obj + slack) accepted = true;
      else {
        ++rep.rejected_steps;
        theta *= 0.5;
      }
    }
    if (!accepted) break;
    const double decrease = obj - next;
    d.swap(trial);
    L = std::move(Ln);
    obj = next;
    rep.objective_trace.push_back(obj);
    if (decrease <= cfg.tol * (1.0 + std::abs(obj))) {
      rep.converged = true;
      break;
    }
  }

  // Output: the minimiser of the problem linearised at the last iterate.
  {
    const double lo = *std::min_element(L.phi.begin(), L.phi.end());
    for (double& v : L.phi) v -= lo;
  }
  c = solve_c(w, L.phi, alpha, cand);
  res.c0 = c;
  res.potential = GridFunction(G, L.phi);
  std::vector<double> base(G.size());
  for (std::size_t k = 0; k < G.size(); ++k) base[k] = L.phi[k] + (c + 1.0) / alpha;

  AlphaConcaveMeasure& out = res.solution;
  out.alpha = alpha;
  out.base = GridFunction(G, base);
  out.atoms = no_atoms;
  const double atom_tol = cfg.atom_tol >= 0.0 ? cfg.atom_tol : 1e-6 * std::abs(1.0 / alpha);
  std::vector<double> dens = cand;
  for (std::size_t k = 0; k < G.size(); ++k)
    if (base[k] <= 1.0 / alpha + atom_tol) {
      out.atoms.add(G.point(k), w[k] * dens[k]);
      dens[k] = 0.0;
    }
  out.density = GridFunction(G, dens);
  rep.singular_mass = out.atoms.total();

  Linearization Lf;
  const double final_obj = evaluate(cand, Lf);
  if (final_obj <= obj + 1e-12 * (1.0 + std::abs(obj))) rep.objective_trace.push_back(final_obj);
  res.plan = Lf.plan;

  const DiscreteMeasure disc = node_measure(G, w, cand, no_atoms);
  rep.knott_smith_violations = int(knott_smith_check(res.plan, out.base, disc, mu, 1e-4).size());

  res.sam = solution_sam(out, mu_in.total());
  DiscreteMeasure target = mu;
  DiscreteMeasure sam_unit = res.sam.normalized();
  rep.sam_residual_w1 = wasserstein1(sam_unit, target);
  rep.sam_diameter = mu.diameter();

  AlphaConcaveFunction f(alpha, out.base);
  const double interior = euclidean_sam(f).total();
  rep.spherical_ratio = spherical_sam(f, 0.0).measure.total() / interior;
  return res;
}

MongeAmpereResidual monge_ampere_residual(const GridFunction& phi, const GridFunction& h,
                                          double alpha) {
  const Grid& G = phi.grid();
  const int n = G.dim();
  if (h.dim() != n) throw InvalidInput("density grid dimension differs");
  const int n0 = G.count(0), n1 = G.count(1);
  const double h0 = G.spacing(0), h1 = n == 2 ? G.spacing(1) : 1.0;
  MongeAmpereResidual r;
  std::vector<double> field(G.size(), 0.0);
  const double e = (1.0 - alpha) / alpha;
  auto fin = [&](int i, int j) { return phi.finite(G.index(i, j)); };
  for (int i = 1; i + 1 < n0; ++i)
    for (int j = (n == 2 ? 1 : 0); j < (n == 2 ? n1 - 1 : 1); ++j) {
      bool ok = true;
      for (int a = -1; a <= 1 && ok; ++a)
        for (int b = (n == 2 ? -1 : 0); b <= (n == 2 ? 1 : 0) && ok; ++b) ok = fin(i + a, j + b);
      if (!ok) continue;
      const double v = phi.at(i, j);
      Vec grad{(phi.at(i + 1, j) - phi.at(i - 1, j)) / (2 * h0), 0.0};
      double det = (phi.at(i + 1, j) - 2 * v + phi.at(i - 1, j)) / (h0 * h0);
      if (n == 2) {
        grad[1] = (phi.at(i, j + 1) - phi.at(i, j - 1)) / (2 * h1);
        const double fyy = (phi.at(i, j + 1) - 2 * v + phi.at(i, j - 1)) / (h1 * h1);
        const double fxy = (phi.at(i + 1, j + 1) - phi.at(i + 1, j - 1) - phi.at(i - 1, j + 1) +
                            phi.at(i - 1, j - 1)) /
                           (4 * h0 * h1);
        det = det * fyy - fxy * fxy;
      }
      if (!h.grid().contains(grad)) throw PreconditionError("gradient leaves the density grid");
      const double rhs = 1.0 - alpha * v > 0.0 ? std::pow(1.0 - alpha * v, e) : kInf;
      const double res = std::abs(interpolate(h, grad) * det - rhs);
      const std::size_t k = G.index(i, j);
      field[k] = res;
      r.nodes.push_back(k);
      r.max = std::max(r.max, res);
      r.mean += res;
    }
  if (r.nodes.empty()) throw PreconditionError("no node has a complete finite stencil");
  r.mean /= double(r.nodes.size());
  r.field = GridFunction(G, field);
  return r;
}

}  // namespace alc
