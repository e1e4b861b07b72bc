#include <cmath>
#include <random>

#include "alc/legendre.hpp"
#include "doctest.h"

using namespace alc;

namespace {

// Brute-force sup over all finite nodes.
double brute_conj(const GridFunction& f, const Vec& y, std::size_t* arg = nullptr) {
  double best = -kInf;
  for (std::size_t k = 0; k < f.values().size(); ++k) {
    if (!f.finite(k)) continue;
    double v = dot(f.grid().point(k), y, f.dim()) - f[k];
    if (v > best) {
      best = v;
      if (arg) *arg = k;
    }
  }
  return best;
}

// Lower convex envelope at the nodes by brute force over node pairs.
std::vector<double> brute_hull(const GridFunction& f) {
  const Grid& G = f.grid();
  const int n = G.count(0);
  std::vector<double> h(n);
  for (int k = 0; k < n; ++k) {
    const double x = G.point(std::size_t(k))[0];
    double best = f[k];
    for (int i = 0; i <= k; ++i)
      for (int j = k; j < n; ++j) {
        if (i == j) continue;
        const double xi = G.point(std::size_t(i))[0], xj = G.point(std::size_t(j))[0];
        const double t = (x - xi) / (xj - xi);
        best = std::min(best, (1 - t) * f[i] + t * f[j]);
      }
    h[k] = best;
  }
  return h;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST_CASE("conjugate of a quadratic") {
  auto f = GridFunction::sample(Grid::line(-5, 5, 1001), [](const Vec& x) { return 0.5 * x[0] * x[0]; });
  Grid dual = Grid::line(-4, 4, 801);
  Conjugate c = conjugate(f, dual);
  const double h = f.grid().spacing(0);
  for (std::size_t j = 0; j < dual.size(); ++j) {
    const double y = dual.point(j)[0];
    CHECK(std::abs(c.values[j] - 0.5 * y * y) <= 0.5 * h * h + 4 * h);
  }
  CHECK(c.values.claimed_convex() == false);
  CHECK(is_discretely_convex(c.values));
}

TEST_CASE("conjugate of an indicator is the absolute value") {
  auto f = GridFunction::sample(Grid::line(-2, 2, 41),
                                [](const Vec& x) { return std::abs(x[0]) <= 1.0 + 1e-12 ? 0.0 : kInf; });
  Conjugate c = conjugate(f, Grid::line(-3, 3, 61));
  for (std::size_t j = 0; j < 61; ++j) CHECK(c.values[j] == std::abs(c.values.grid().point(j)[0]));
}

TEST_CASE("scaling rule for a quadratic") {
  auto f = GridFunction::sample(Grid::line(-10, 10, 2001), [](const Vec& x) { return x[0] * x[0]; });
  Conjugate c = conjugate(f, Grid::line(-4, 4, 81));
  for (std::size_t j = 0; j < 81; ++j) {
    const double y = c.values.grid().point(j)[0];
    CHECK(std::abs(c.values[j] - y * y / 4) <= 1e-4);
  }
}

TEST_CASE("identically infinite input is rejected") {
  GridFunction f(Grid::line(0, 1, 3), {kInf, kInf, kInf});
  CHECK_THROWS_AS(conjugate(f, Grid::line(0, 1, 3)), PreconditionError);
}

TEST_CASE("2D conjugate matches brute force and the transposed sweep") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  Grid g({Axis{-1, 2, 13}, Axis{-2, 1, 17}});
  // Random values with an infinite corner to exercise empty columns.
  std::vector<double> v(g.size());
  for (auto& x : v) x = u(rng);
  auto f = GridFunction(g, v);
  Grid dual({Axis{-3, 3, 11}, Axis{-2, 4, 9}});
  Conjugate c = conjugate(f, dual);
  for (std::size_t j = 0; j < dual.size(); ++j) {
    std::size_t arg = 0;
    const double b = brute_conj(f, dual.point(j), &arg);
    CHECK(std::abs(c.values[j] - b) <= 1e-12);
    CHECK(std::abs(dot(g.point(c.argmax[j]), dual.point(j), 2) - f[c.argmax[j]] - b) <= 1e-12);
  }
  // Transposed data swept in the other order.
  Grid gt({g.axis(1), g.axis(0)});
  std::vector<double> vt(g.size());
  for (int i = 0; i < 13; ++i)
    for (int k = 0; k < 17; ++k) vt[gt.index(k, i)] = v[g.index(i, k)];
  Grid dt({dual.axis(1), dual.axis(0)});
  Conjugate ct = conjugate(GridFunction(gt, vt), dt);
  for (int i = 0; i < 11; ++i)
    for (int k = 0; k < 9; ++k) CHECK(std::abs(ct.values[dt.index(k, i)] - c.values[dual.index(i, k)]) <= 1e-12);
}

TEST_CASE("order reversal and translation rule") {
  Grid g = Grid::line(-3, 3, 121);
  auto f = GridFunction::sample(g, [](const Vec& x) { return x[0] * x[0]; });
  auto h = GridFunction::sample(g, [](const Vec& x) { return x[0] * x[0] + 0.1 * std::abs(x[0]); });
  Grid dual = Grid::line(-5, 5, 101);
  auto cf = conjugate(f, dual).values, ch = conjugate(h, dual).values;
  for (std::size_t j = 0; j < dual.size(); ++j) CHECK(cf[j] >= ch[j]);
  const double b = 0.75;
  Grid gs = Grid::line(-3 + b, 3 + b, 121);
  auto fs = GridFunction::sample(gs, [b](const Vec& x) { return (x[0] - b) * (x[0] - b); });
  auto cs = conjugate(fs, dual).values;
  for (std::size_t j = 0; j < dual.size(); ++j)
    CHECK(std::abs(cs[j] - (cf[j] + b * dual.point(j)[0])) <= 1e-12);
}

TEST_CASE("biconjugate of convex piecewise-linear data is exact") {
  Grid g = Grid::line(-2, 2, 41);
  // slopes -1.5, -0.25, 0.5, 2 all sit on the dual grid below
  auto f = GridFunction::sample(g, [](const Vec& x) {
    return std::max({-1.5 * x[0] - 1.0, -0.25 * x[0], 0.5 * x[0] - 0.2, 2.0 * x[0] - 2.1});
  });
  Grid dual = Grid::line(-3, 3, 25);
  auto bb = biconjugate(f, g, dual);
  CHECK(max_abs_diff(bb, f) <= 1e-12);
  auto bbb = biconjugate(bb, g, dual);
  CHECK(max_abs_diff(bbb, bb) <= 1e-12);
  auto shifted = GridFunction::sample(g, [&](const Vec& x) {
    return std::max({-1.5 * x[0] - 1.0, -0.25 * x[0], 0.5 * x[0] - 0.2, 2.0 * x[0] - 2.1}) + 5.0;
  });
  auto bs = biconjugate(shifted, g, dual);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(bs[k] - (bb[k] + 5.0)) <= 1e-12);
}

TEST_CASE("biconjugate of a non-convex function is its lower envelope") {
  Grid g = Grid::line(-2, 5, 85);  // h = 1/12, tangency points 1/6 and 19/6 are nodes
  auto f = GridFunction::sample(g, [](const Vec& x) {
    return std::min(x[0] * x[0], (x[0] - 3) * (x[0] - 3) + 1);
  });
  Grid dual = Grid::line(-5, 11, 385);  // contains the bridge slope 1/3
  auto bb = biconjugate(f, g, dual);
  auto hull = brute_hull(f);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(bb[k] <= f[k] + 1e-12);
    CHECK(std::abs(bb[k] - hull[k]) <= 1e-9);
  }
  // Default dual grid still gives a minorant of the envelope.
  auto bd = biconjugate(f);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(bd[k] <= hull[k] + 1e-12);
}

TEST_CASE("Fenchel-Young residual of a smooth function shrinks with h") {
  auto residual = [](int n) {
    auto f = GridFunction::sample(Grid::line(-3, 3, n), [](const Vec& x) {
      return 0.5 * x[0] * x[0] + std::log(std::cosh(x[0]));
    });
    auto fs = conjugate(f, default_dual_grid(f)).values;
    double m = 0.0;
    for (int k = n / 4; k < 3 * n / 4; ++k) m = std::max(m, fenchel_young_residual(f, fs, k));
    return std::make_pair(m, f.grid().spacing(0));
  };
  auto [r1, h1] = residual(201);
  auto [r2, h2] = residual(401);
  CHECK(r1 <= 5 * h1);
  CHECK(r2 <= 0.5 * r1);
  (void)h2;
}

TEST_CASE("subgradient membership") {
  auto f = GridFunction::sample(Grid::line(-2, 2, 41), [](const Vec& x) { return 0.5 * x[0] * x[0]; });
  CHECK(subgradient_contains(f, 30, {1.0, 0.0}, 1e-12));
  CHECK_FALSE(subgradient_contains(f, 30, {1.5, 0.0}, 1e-12));
  auto a = GridFunction::sample(Grid::line(-2, 2, 41), [](const Vec& x) { return std::abs(x[0]); });
  CHECK(subgradient_contains(a, 20, {0.3, 0.0}, 1e-12));
}

TEST_CASE("conjugate evaluator agrees with brute force") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  auto f1 = GridFunction::sample(Grid::line(-2, 2, 51), [](const Vec& x) { return std::cosh(x[0]); });
  ConjugateEvaluator e1(f1);
  auto f2 = GridFunction::sample(Grid({Axis{-1, 1, 15}, Axis{-2, 2, 21}}), [](const Vec& x) {
    return x[0] * x[0] + 0.3 * x[1] * x[1] + 0.2 * x[0] * x[1];
  });
  ConjugateEvaluator e2(f2);
  for (int t = 0; t < 200; ++t) {
    Vec y{u(rng), u(rng)};
    std::size_t a1 = 0, b1 = 0, a2 = 0, b2 = 0;
    CHECK(std::abs(e1({y[0], 0}, &a1) - brute_conj(f1, {y[0], 0}, &b1)) <= 1e-12);
    CHECK(std::abs(e2(y, &a2) - brute_conj(f2, y, &b2)) <= 1e-12);
  }
  CHECK(e1.domain_min() == -2.0);
  CHECK(e1.domain_max() == 2.0);
}
