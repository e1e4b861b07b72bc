#pragma once

#include <string>
#include <vector>

#include "alc/grid.hpp"
#include "alc/measure.hpp"
#include "alc/minkowski.hpp"
#include "alc/transport.hpp"
#include "alc/verify.hpp"
#include "json.hpp"

// File formats. Every writer is paired with a reader that reproduces the
// object bit for bit: doubles are printed in shortest round-trip form.
// Malformed files raise InvalidInput.

namespace alc::io {

using Json = nlohmann::json;

// Shortest decimal that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

// {"dim", "axes": [{"min", "max", "count"}], "values": [...], "convex", "coercive"};
// +inf is null, values row major with axis 0 slowest.
Json to_json(const Grid& g);
Grid grid_from_json(const Json& j);
Json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const Json& j);
void write_grid_function(const std::string& path, const GridFunction& f);
GridFunction read_grid_function(const std::string& path);

// Grid from "min:max:count" or "min:max:count,min:max:count".
Grid parse_grid_spec(const std::string& spec);

// CSV with header x1[,x2],weight. Spherical measures get a sidecar
// `<path>.json` holding {"unit": true}; readers pick it up when present.
void write_measure(const std::string& path, const DiscreteMeasure& m);
DiscreteMeasure read_measure(const std::string& path);

// Sparse triplets with header i,j,weight.
void write_plan(const std::string& path, const TransportPlan& p);
TransportPlan read_plan(const std::string& path, std::size_t n, std::size_t m);

// One value per line under a single header, row k aligned with atom k.
void write_column(const std::string& path, const std::string& header,
                  const std::vector<double>& v);
std::vector<double> read_column(const std::string& path);

void write_json(const std::string& path, const Json& j);
Json read_json(const std::string& path);
std::string dump(const Json& j);  // two-space indent, trailing newline

// Solve configuration: {alpha, grid, theta, tol, maxIter, otBackend, epsilon,
// seed}; every key optional, unknown keys rejected.
SolveConfig solve_config_from_json(const Json& j);
Json to_json(const SolveConfig& c);

Json to_json(const SolveReport& r);
Json to_json(const NecessaryReport& r);
Json to_json(const IntegrabilityReport& r);
Json to_json(const BalanceReport& r, int dim);

}  // namespace alc::io
