#include <cstring>
#include <filesystem>
#include <random>

#include "alc/io.hpp"
#include "doctest.h"

using namespace alc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  fs::path d = fs::temp_directory_path() / "alc_test_io";
  fs::create_directories(d);
  return d / name;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("shortest doubles round trip") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 20000; ++k) {
    std::uint64_t u = bits(rng);
    double v;
    std::memcpy(&v, &u, sizeof v);
    if (!std::isfinite(v)) continue;
    CHECK(same_bits(io::parse_double(io::format_double(v)), v));
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK_THROWS_AS(io::parse_double("1.0x"), InvalidInput);
  CHECK_THROWS_AS(io::parse_double(""), InvalidInput);
}

TEST_CASE("grid function file") {
  Grid g = Grid::square(-1.3, 2.7, 7);
  auto f = GridFunction::sample(g, [](const Vec& x) {
    return x[0] > 2.0 ? kInf : std::exp(x[0]) / 3.0 + x[1] * x[1];
  });
  const auto p = scratch("f.json").string();
  io::write_grid_function(p, f);
  auto back = io::read_grid_function(p);
  CHECK(back.grid() == f.grid());
  REQUIRE(back.values().size() == f.values().size());
  for (std::size_t k = 0; k < f.values().size(); ++k) CHECK(same_bits(back[k], f[k]));
  auto j = io::read_json(p);
  CHECK(j["values"].back().is_null());
  CHECK(j["dim"] == 2);

  io::Json bad = j;
  bad["values"].erase(0);
  CHECK_THROWS_AS(io::grid_function_from_json(bad), InvalidInput);
  CHECK(io::parse_grid_spec("-1:1:5,0:2:3").count(1) == 3);
  CHECK_THROWS_AS(io::parse_grid_spec("-1:1"), InvalidInput);
}

TEST_CASE("measure, plan and column files") {
  DiscreteMeasure m;
  m.dim = 2;
  m.add({1.0 / 3.0, -2e-17}, 0.25);
  m.add({-7.5, 1e300}, 1.0 / 7.0);
  const auto p = scratch("m.csv").string();
  io::write_measure(p, m);
  auto back = io::read_measure(p);
  CHECK(back.dim == 2);
  CHECK_FALSE(back.unit);
  for (std::size_t k = 0; k < m.size(); ++k) {
    CHECK(same_bits(back.points[k][0], m.points[k][0]));
    CHECK(same_bits(back.points[k][1], m.points[k][1]));
    CHECK(same_bits(back.weights[k], m.weights[k]));
  }
  m.unit = true;
  m.points = {{0.6, 0.8}, {-1, 0}};
  io::write_measure(p, m);
  CHECK(io::read_measure(p).unit);
  m.unit = false;
  io::write_measure(p, m);
  CHECK_FALSE(io::read_measure(p).unit);

  TransportPlan plan{2, 3, {0, 1, 1}, {2, 0, 1}, {0.1, 0.2, 1.0 / 3.0}};
  const auto q = scratch("plan.csv").string();
  io::write_plan(q, plan);
  auto pb = io::read_plan(q, 2, 3);
  CHECK(pb.rows == plan.rows);
  CHECK(pb.cols == plan.cols);
  CHECK(pb.weights == plan.weights);
  CHECK_THROWS_AS(io::read_plan(q, 1, 3), InvalidInput);

  const auto c = scratch("phi.csv").string();
  std::vector<double> col{-0.0, 3.25, 1e-310};
  io::write_column(c, "phi", col);
  auto cb = io::read_column(c);
  for (std::size_t k = 0; k < col.size(); ++k) CHECK(same_bits(cb[k], col[k]));
}

TEST_CASE("config parsing") {
  auto c = io::solve_config_from_json(io::Json::parse(
      R"({"alpha": -0.3, "grid": "-5:5:21", "theta": 1, "maxIter": 9, "otBackend": "entropic"})"));
  CHECK(c.alpha == -0.3);
  CHECK(c.grid->count(0) == 21);
  CHECK(c.max_iter == 9);
  CHECK(c.backend == "entropic");
  auto again = io::solve_config_from_json(io::to_json(c));
  CHECK(io::dump(io::to_json(again)) == io::dump(io::to_json(c)));
  CHECK_THROWS_AS(io::solve_config_from_json(io::Json::parse(R"({"alpah": 1})")), InvalidInput);
  CHECK_THROWS_AS(io::solve_config_from_json(io::Json::parse(R"({"maxIter": "x"})")), InvalidInput);
}
