#include <cmath>

#include "alc/alpha.hpp"
#include "doctest.h"

using namespace alc;

namespace {

const double kPi = 3.14159265358979323846;

AlphaConcaveFunction on_line(double a, double lo, double hi, int n, double (*phi)(double)) {
  return AlphaConcaveFunction(a, GridFunction::sample(Grid::line(lo, hi, n),
                                                      [phi](const Vec& x) { return phi(x[0]); }));
}

double absx(double x) { return std::abs(x); }
double sqx(double x) { return x * x; }

}  // namespace

TEST_CASE("psi_alpha domain") {
  CHECK(psi_alpha(0.0, -0.5) == 1.0);
  CHECK(psi_alpha(kInf, -0.5) == 0.0);
  CHECK(psi_alpha(2.0, -0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(psi_alpha(-2.0, -0.5), PreconditionError);
  CHECK_THROWS_AS(psi_alpha(-3.0, -0.5), PreconditionError);
}

TEST_CASE("class invariants") {
  Grid g = Grid::line(-1, 1, 11);
  auto zero = GridFunction::sample(g, [](const Vec&) { return 0.0; });
  CHECK_THROWS_AS(AlphaConcaveFunction(-1.0, zero), InvalidInput);
  CHECK_THROWS_AS(AlphaConcaveFunction(0.0, zero), InvalidInput);
  CHECK_THROWS_AS(AlphaConcaveFunction(-0.6, GridFunction::sample(Grid::square(-1, 1, 3),
                                                                  [](const Vec&) { return 0.0; })),
                  InvalidInput);
  auto low = GridFunction::sample(g, [](const Vec&) { return -2.5; });
  CHECK_THROWS_AS(AlphaConcaveFunction(-0.5, low), InvalidInput);
}

TEST_CASE("total mass closed forms") {
  // Oracle: antiderivative -4/(2+x) on each half line.
  for (double L : {60.0, 4000.0}) {
    auto f = on_line(-0.5, -L, L, int(40 * L) + 1, absx);
    CHECK(std::abs(total_mass(f).value - (4.0 - 8.0 / (2.0 + L))) <= 1e-3);
  }
  auto wide = on_line(-0.5, -4000, 4000, 320001, absx);
  CHECK(std::abs(total_mass(wide).value - 4.0) <= 5e-3);
  // Oracle: integral of (1 + x^2/2)^-2 is pi / sqrt 2.
  auto q = on_line(-0.5, -40, 40, 8001, sqx);
  CHECK(std::abs(total_mass(q).value - kPi / std::sqrt(2.0)) <= 5e-4);
}

TEST_CASE("self variation closed forms") {
  auto q = on_line(-0.5, -40, 40, 8001, sqx);
  CHECK(std::abs(self_variation_formula(q) - kPi / (2.0 * std::sqrt(2.0))) <= 5e-3);
  // Truncated oracle 8/(2+L) - 16/(2+L)^2 for |x|.
  auto a = on_line(-0.5, -4000, 4000, 320001, absx);
  const double L = 4000.0;
  CHECK(std::abs(self_variation_formula(a) - (8.0 / (2 + L) - 16.0 / ((2 + L) * (2 + L)))) <= 5e-4);
  CHECK(std::abs(self_variation_formula(a)) <= 1e-2);
}

TEST_CASE("weighted moments and the integrability hypothesis") {
  auto a = on_line(-0.5, -4000, 4000, 320001, absx);
  // Oracle: antiderivative -(1+x/2)^-2 gives 2.
  CHECK(std::abs(weighted_moment(a, 0.0, 1).value - 2.0) <= 5e-3);
  CHECK_THROWS_AS(weighted_moment(a, 1.0, 0), HypothesisViolation);
  CHECK_NOTHROW(weighted_moment(a, 0.5, 0));
}

TEST_CASE("Euclidean measure of |x| is two atoms") {
  auto a = on_line(-0.5, -4000, 4000, 320001, absx);
  DiscreteMeasure m = euclidean_sam(a);
  REQUIRE(m.size() == 2);
  CHECK(m.points[0][0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(m.points[1][0] == doctest::Approx(1.0).epsilon(1e-12));
  // Oracle: 1 - (1 + L/2)^-2 per side.
  const double side = 1.0 - std::pow(1.0 + 2000.0, -2.0);
  CHECK(m.weights[0] == doctest::Approx(side).epsilon(1e-9));
  CHECK(m.weights[1] == doctest::Approx(side).epsilon(1e-9));
}

TEST_CASE("kinks inside a cell are split by sub-cell width") {
  // kink at 0.005, cell [0, 0.01] splits evenly between slopes -1 and +1
  auto g = AlphaConcaveFunction(-0.5, GridFunction::sample(Grid::line(-2.0, 2.0, 401), [](const Vec& x) {
                                  return std::abs(x[0] - 0.005);
                                }));
  DiscreteMeasure m = euclidean_sam(g);
  REQUIRE(m.size() == 2);
  CHECK(m.points[0][0] == doctest::Approx(-1.0));
  CHECK(m.points[1][0] == doctest::Approx(1.0));
  PlMesh mesh = pl_mesh(g.base(), g.alpha());
  double total = 0.0;
  int halves = 0;
  for (auto& p : mesh.pieces) {
    total += p.mass;
    if (std::abs(p.measure - 0.005) < 1e-9) ++halves;
  }
  CHECK(halves == 2);
  CHECK(m.total() == doctest::Approx(total).epsilon(1e-14));
}

TEST_CASE("spherical measures of flat bases") {
  auto seg = AlphaConcaveFunction(-0.5, GridFunction::sample(Grid::line(-2, 2, 41), [](const Vec& x) {
                                    return std::abs(x[0]) <= 1.0 + 1e-12 ? 0.0 : kInf;
                                  }));
  SphericalSam s = spherical_sam(seg);
  REQUIRE(s.measure.size() == 2);
  CHECK(s.measure.points[0][0] == -1.0);
  CHECK(s.measure.weights[0] == doctest::Approx(1.0));
  CHECK(s.measure.weights[1] == doctest::Approx(1.0));
  CHECK_FALSE(s.truncated);
  auto sq = AlphaConcaveFunction(-0.3, GridFunction::sample(Grid::square(-2, 2, 21), [](const Vec& x) {
                                   return std::max(std::abs(x[0]), std::abs(x[1])) <= 1.0 + 1e-12 ? 0.0 : kInf;
                                 }));
  SphericalSam s2 = spherical_sam(sq);
  REQUIRE(s2.measure.size() == 4);
  for (double w : s2.measure.weights) CHECK(w == doctest::Approx(2.0));
}

TEST_CASE("gradient balance") {
  auto f = AlphaConcaveFunction(-0.5, GridFunction::sample(Grid::line(-1, 2, 301), [](const Vec& x) {
                                  return std::max(0.0, x[0]);
                                }));
  Balance b = gradient_balance(f);
  CHECK(b.interior[0] == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(std::abs(b.interior[0] + b.boundary[0]) <= 1e-12);
  auto g = AlphaConcaveFunction(-0.3, GridFunction::sample(Grid::square(-2, 3, 41), [](const Vec& x) {
                                  return x[0] * x[0] + 0.5 * x[1] * x[1] + 0.3 * x[0] * x[1] + x[1] + 1.0;
                                }));
  Balance b2 = gradient_balance(g);
  for (int d = 0; d < 2; ++d) CHECK(std::abs(b2.interior[d] + b2.boundary[d]) <= 1e-9 * b2.scale);
}

TEST_CASE("steeper bases carry less mass") {
  double prev = 0.0;
  for (double t : {0.5, 0.25, 0.1, 0.05}) {
    auto f = AlphaConcaveFunction(-0.5, GridFunction::sample(Grid::line(-50, 50, 5001), [t](const Vec& x) {
                                    return (1 + t) * x[0] * x[0];
                                  }));
    const double j = total_mass(f).value;
    CHECK(j > prev);
    prev = j;
  }
}

TEST_CASE("combination at zero weight and self combination") {
  auto f = on_line(-0.5, -3, 3, 121, [](double x) { return 0.5 * x * x + 0.2 * x; });
  auto g = on_line(-0.5, -2, 2, 81, absx);
  auto f0 = alpha_combination(f, g, 0.0);
  REQUIRE(f0.grid() == f.grid());
  for (std::size_t k = 0; k < f.grid().size(); ++k) CHECK(std::abs(f0.base()[k] - f.base()[k]) <= 1e-12);
  auto ff = alpha_combination(f, f, 1.0);
  for (std::size_t k = 0; k < ff.grid().size(); ++k) {
    const double x = ff.grid().point(k)[0];
    CHECK(std::abs(ff.base()[k] - 2 * (0.5 * (x / 2) * (x / 2) + 0.2 * x / 2)) <= 1e-12);
  }
  // 2D box supports, dense dual grid
  auto h = AlphaConcaveFunction(-0.3, GridFunction::sample(Grid::square(-2, 2, 21), [](const Vec& x) {
                                  return x[0] * x[0] + x[1] * x[1] + 0.5;
                                }));
  auto h0 = alpha_combination(h, h, 0.0);
  double dev = 0.0;
  for (std::size_t k = 0; k < h.grid().size(); ++k) dev = std::max(dev, std::abs(h0.base()[k] - h.base()[k]));
  CHECK(dev <= 1e-9);
}

TEST_CASE("first variation: |x| with itself vanishes") {
  auto a = on_line(-0.5, -4000, 4000, 320001, absx);
  NumericVariation nv = first_variation_numeric(a, a);
  CHECK(std::abs(nv.value) <= 1e-2);
  FormulaVariation fv = first_variation_formula(a, a);
  CHECK(std::abs(fv.total - self_variation_formula(a)) <= 1e-2 * (1 + std::abs(fv.total)));
}

TEST_CASE("first variation: quadratic with itself") {
  auto q = on_line(-0.5, -40, 40, 8001, sqx);
  NumericVariation nv = first_variation_numeric(q, q);
  CHECK(std::abs(nv.value - kPi / (2 * std::sqrt(2.0))) <= 1e-2);
  FormulaVariation fv = first_variation_formula(q, q);
  CHECK(std::abs(fv.total - self_variation_formula(q)) <= 1e-2 * std::abs(fv.total));
}

TEST_CASE("first variation with a compact support and a boundary term") {
  auto f = on_line(-0.4, -1, 1, 801, [](double x) { return 0.5 * x * x; });
  auto g = on_line(-0.4, -0.5, 1.5, 801, [](double x) { return x * x + 0.3; });
  FormulaVariation fv = first_variation_formula(f, g);
  NumericVariation nv = first_variation_numeric(f, g);
  CHECK(fv.boundary != 0.0);
  CHECK(std::abs(nv.value - fv.total) <= 2e-2 * (1 + std::abs(fv.total)));
}

TEST_CASE("variation requires a comparability certificate") {
  // support of g sticks out of every dilate of [0, 1]
  auto f = on_line(-0.4, 0, 1, 101, [](double x) { return x * x; });
  auto g = on_line(-0.4, -1, 1, 101, [](double x) { return x * x; });
  CHECK_FALSE(certify_comparability(f, g).has_value());
  CHECK_THROWS_AS(first_variation_formula(f, g), PreconditionError);
}
