#include <cmath>

#include "alc/alpha.hpp"
#include "alc/minkowski.hpp"
#include "doctest.h"

using namespace alc;

namespace {

DiscreteMeasure two_atoms() {
  DiscreteMeasure mu;
  mu.dim = 1;
  mu.add({-1, 0}, 0.5);
  mu.add({1, 0}, 0.5);
  return mu;
}

}  // namespace

TEST_CASE("F_alpha of uniform densities") {
  // rho = 1/8 on [-4, 4]: integral of 8^{-2/3} over length 8 is 8^{1/3} = 2.
  Grid G = Grid::line(-4, 4, 801);
  auto rho = GridFunction::sample(G, [](const Vec&) { return 1.0 / 8.0; });
  CHECK(f_alpha(rho, -0.5) == doctest::Approx(-2.0).epsilon(1e-12));
  auto zero = GridFunction::sample(G, [](const Vec&) { return 0.0; });
  CHECK(f_alpha(zero, -0.5) == 0.0);
}

TEST_CASE("F_alpha lower bound constants") {
  const double a = -0.4;
  auto b = f_alpha_lower_bound(a, 1, 0.2, 0.7);
  // Oracle: trapezoid of |x|^{a1/alpha} on [0,1] (singular endpoint avoided by
  // the closed form 1/(s+1)) and of |x|^{a2/alpha} on [1, inf).
  const double beta = -a * std::pow(1 - a, 1 / a - 1);
  const double s1 = 0.2 / a, s2 = 0.7 / a;
  CHECK(b.c1 == doctest::Approx(-beta * 2 / (s1 + 1)));
  CHECK(b.c2 == doctest::Approx(-beta * 2 / (-s2 - 1)));
  // The bound holds for a family of uniform densities of growing width.
  for (double tau : {0.1, 1.0, 10.0, 100.0}) {
    const double F = -std::pow(2 * tau, -1 / (1 - a)) * 2 * tau;
    const double M = tau / 2;
    CHECK(F >= b(M));
  }
  CHECK_THROWS_AS(f_alpha_lower_bound(a, 1, 0.5, 0.7), InvalidInput);
}

TEST_CASE("objective: uniform beats a point mass") {
  auto mu = two_atoms();
  Grid G = Grid::line(-10, 10, 201);
  const auto w = node_weights(G);
  std::vector<double> spike(G.size(), 0.0);
  spike[100] = 1.0 / w[100];
  std::vector<double> flat(G.size());
  for (std::size_t k = 0; k < G.size(); ++k) flat[k] = 1.0 / 20.0;
  DiscreteMeasure none{1, {}, {}, false};
  const double a = -0.5;
  const double o_spike = objective(GridFunction(G, spike), none, a, mu);
  const double o_flat = objective(GridFunction(G, flat), none, a, mu);
  // Uniform on [-10, 10] pairs negative x with -1: T = 5, F = -20^{1/3}.
  CHECK(o_flat == doctest::Approx(-1.5 * std::cbrt(20.0) + 0.5 * 5.0).epsilon(1e-3));
  CHECK(o_spike >= o_flat);
  CHECK(objective(GridFunction(G, flat), none, a, mu) == o_flat);
}

TEST_CASE("two-atom inverse problem") {
  SolveConfig cfg;
  cfg.alpha = -0.5;
  cfg.grid = Grid::line(-40, 40, 801);
  auto r = solve(two_atoms(), cfg);
  const auto& rep = r.report;
  CHECK(rep.converged);
  for (std::size_t k = 1; k < rep.objective_trace.size(); ++k)
    CHECK(rep.objective_trace[k] <= rep.objective_trace[k - 1] + 1e-9);
  const GridFunction& b = r.solution.base;
  const int N = b.grid().count(0);
  double asym = 0.0;
  for (int i = 0; i < N; ++i) asym = std::max(asym, std::abs(b.at(i) - b.at(N - 1 - i)));
  CHECK(asym <= 1e-3);
  CHECK(rep.knott_smith_violations == 0);
  // Closed form on the whole line: phi_0 = |x| + 2(sqrt 2 - 1), c_0 = -sqrt 2;
  // truncation at |x| = 40 moves both by well under 1%.
  CHECK(r.c0 == doctest::Approx(-std::sqrt(2.0)).epsilon(5e-3));
  CHECK(b.at(N / 2) == doctest::Approx(2 * (std::sqrt(2.0) - 1)).epsilon(1e-2));
  CHECK(b.at(N / 2 + 100) - b.at(N / 2) == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(r.solution.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.sam_residual_w1 <= 1e-9);
}

TEST_CASE("solver preconditions") {
  SolveConfig cfg;
  DiscreteMeasure off = two_atoms();
  off.points[0][0] = -0.5;
  CHECK_THROWS_AS(solve(off, cfg), PreconditionError);
  DiscreteMeasure point;
  point.dim = 1;
  point.add({0, 0}, 1);
  CHECK_THROWS_AS(solve(point, cfg), PreconditionError);
  cfg.alpha = -1.5;
  CHECK_THROWS_AS(solve(two_atoms(), cfg), InvalidInput);
}

TEST_CASE("Monge-Ampere residual of a quadratic") {
  // phi = 1/2 <A x, x>; density on the dual side from the closed form
  // h(y) = det(A^-1) (1 - alpha/2 <A^-1 y, y>)^{(1-alpha)/alpha}.
  const double a = -0.3;
  const double A00 = 1.0, A01 = 0.3, A11 = 0.6;
  const double det = A00 * A11 - A01 * A01;
  const double I00 = A11 / det, I01 = -A01 / det, I11 = A00 / det;
  auto run = [&](int n) {
    Grid P = Grid::square(-1, 1, n);
    Grid D = Grid::square(-2, 2, 2 * n - 1);
    auto phi = GridFunction::sample(P, [&](const Vec& x) {
      return 0.5 * (A00 * x[0] * x[0] + 2 * A01 * x[0] * x[1] + A11 * x[1] * x[1]);
    });
    auto h = GridFunction::sample(D, [&](const Vec& y) {
      const double q = I00 * y[0] * y[0] + 2 * I01 * y[0] * y[1] + I11 * y[1] * y[1];
      return (1 / det) * std::pow(1 - a * 0.5 * q, (1 - a) / a);
    });
    return monge_ampere_residual(phi, h, a).max;
  };
  const double r1 = run(21), r2 = run(41);
  CHECK(r1 <= 0.1 * 0.1);
  CHECK(r1 / r2 >= 3.0);
  // Linear phi: zero Hessian, the residual is the right-hand side, largest at
  // the interior node x = -0.8 where 1 - alpha phi = 0.8.
  Grid P = Grid::line(-1, 1, 11);
  auto lin = GridFunction::sample(P, [](const Vec& x) { return 0.5 * x[0]; });
  auto h = GridFunction::sample(Grid::line(-1, 1, 11), [](const Vec&) { return 1.0; });
  auto r = monge_ampere_residual(lin, h, -0.5);
  CHECK(r.max == doctest::Approx(std::pow(0.8, -3.0)));
}
