#include "alc/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace alc::io {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path);
  out << text;
  if (!out) throw InvalidInput("write failed: " + path);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t k = s.find(sep, start);
    out.push_back(s.substr(start, k == std::string::npos ? std::string::npos : k - start));
    if (k == std::string::npos) break;
    start = k + 1;
  }
  return out;
}

// Lines without terminators; a trailing empty line and CR endings are tolerated.
std::vector<std::string> lines_of(const std::string& text) {
  auto lines = split(text, '\n');
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

long parse_index(const std::string& s) {
  long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw InvalidInput("bad integer '" + s + "'");
  return v;
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw InvalidInput(std::string("missing number ") + key);
  return j[key].get<double>();
}

std::string sidecar(const std::string& path) { return path + ".json"; }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InvalidInput("cannot format number");
  return std::string(buf, p);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw InvalidInput("bad number '" + s + "'");
  return v;
}

Json to_json(const Grid& g) {
  Json axes = Json::array();
  for (int k = 0; k < g.dim(); ++k)
    axes.push_back({{"min", g.axis(k).min}, {"max", g.axis(k).max}, {"count", g.axis(k).count}});
  return {{"dim", g.dim()}, {"axes", axes}};
}

Grid grid_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("axes") || !j["axes"].is_array())
    throw InvalidInput("grid needs an axes array");
  std::vector<Axis> axes;
  for (const auto& a : j["axes"]) {
    if (!a.contains("count") || !a["count"].is_number_integer())
      throw InvalidInput("axis count must be an integer");
    axes.push_back({number(a, "min"), number(a, "max"), a["count"].get<int>()});
  }
  if (j.contains("dim") && j["dim"] != Json(int(axes.size())))
    throw InvalidInput("dim does not match the number of axes");
  return Grid(axes);
}

Json to_json(const GridFunction& f) {
  Json j = to_json(f.grid());
  Json vals = Json::array();
  for (double v : f.values()) vals.push_back(v == kInf ? Json(nullptr) : Json(v));
  j["values"] = std::move(vals);
  j["convex"] = f.claimed_convex();
  j["coercive"] = f.claimed_coercive();
  return j;
}

GridFunction grid_function_from_json(const Json& j) {
  Grid g = grid_from_json(j);
  if (!j.contains("values") || !j["values"].is_array()) throw InvalidInput("missing values array");
  const auto& a = j["values"];
  if (a.size() != g.size()) throw InvalidInput("values length does not match the grid");
  std::vector<double> v;
  v.reserve(a.size());
  for (const auto& x : a) {
    if (x.is_null())
      v.push_back(kInf);
    else if (x.is_number())
      v.push_back(x.get<double>());
    else
      throw InvalidInput("values must be numbers or null");
  }
  auto flag = [&](const char* k) { return j.contains(k) && j[k].is_boolean() && j[k].get<bool>(); };
  return GridFunction(g, std::move(v), flag("convex"), flag("coercive"));
}

void write_grid_function(const std::string& path, const GridFunction& f) {
  write_json(path, to_json(f));
}

GridFunction read_grid_function(const std::string& path) {
  return grid_function_from_json(read_json(path));
}

Grid parse_grid_spec(const std::string& spec) {
  std::vector<Axis> axes;
  for (const auto& part : split(spec, ',')) {
    auto f = split(part, ':');
    if (f.size() != 3) throw InvalidInput("grid spec axis must be min:max:count");
    axes.push_back({parse_double(f[0]), parse_double(f[1]), int(parse_index(f[2]))});
  }
  return Grid(axes);
}

void write_measure(const std::string& path, const DiscreteMeasure& m) {
  m.validate();
  std::string out = m.dim == 2 ? "x1,x2,weight\n" : "x1,weight\n";
  for (std::size_t k = 0; k < m.size(); ++k) {
    out += format_double(m.points[k][0]);
    if (m.dim == 2) out += "," + format_double(m.points[k][1]);
    out += "," + format_double(m.weights[k]) + "\n";
  }
  spit(path, out);
  const std::string side = sidecar(path);
  if (m.unit)
    spit(side, dump(Json{{"unit", true}}));
  else if (std::filesystem::exists(side))
    std::filesystem::remove(side);
}

DiscreteMeasure read_measure(const std::string& path) {
  auto lines = lines_of(slurp(path));
  if (lines.empty()) throw InvalidInput(path + ": empty measure file");
  DiscreteMeasure m;
  if (lines[0] == "x1,weight")
    m.dim = 1;
  else if (lines[0] == "x1,x2,weight")
    m.dim = 2;
  else
    throw InvalidInput(path + ": header must be x1,weight or x1,x2,weight");
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto f = split(lines[r], ',');
    if (int(f.size()) != m.dim + 1) throw InvalidInput(path + ": wrong field count on line " + std::to_string(r + 1));
    Vec p{parse_double(f[0]), m.dim == 2 ? parse_double(f[1]) : 0.0};
    m.add(p, parse_double(f[m.dim]));
  }
  const std::string side = sidecar(path);
  if (std::filesystem::exists(side)) {
    Json j = read_json(side);
    m.unit = j.value("unit", false);
  }
  m.validate();
  return m;
}

void write_plan(const std::string& path, const TransportPlan& p) {
  std::string out = "i,j,weight\n";
  for (std::size_t k = 0; k < p.size(); ++k)
    out += std::to_string(p.rows[k]) + "," + std::to_string(p.cols[k]) + "," +
           format_double(p.weights[k]) + "\n";
  spit(path, out);
}

TransportPlan read_plan(const std::string& path, std::size_t n, std::size_t m) {
  auto lines = lines_of(slurp(path));
  if (lines.empty() || lines[0] != "i,j,weight") throw InvalidInput(path + ": header must be i,j,weight");
  TransportPlan p;
  p.n = n;
  p.m = m;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto f = split(lines[r], ',');
    if (f.size() != 3) throw InvalidInput(path + ": wrong field count");
    const long i = parse_index(f[0]), j = parse_index(f[1]);
    if (i < 0 || j < 0 || std::size_t(i) >= n || std::size_t(j) >= m)
      throw InvalidInput(path + ": index out of range");
    const double w = parse_double(f[2]);
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput(path + ": weights must be finite and >= 0");
    p.rows.push_back(int(i));
    p.cols.push_back(int(j));
    p.weights.push_back(w);
  }
  return p;
}

void write_column(const std::string& path, const std::string& header,
                  const std::vector<double>& v) {
  std::string out = header + "\n";
  for (double x : v) out += format_double(x) + "\n";
  spit(path, out);
}

std::vector<double> read_column(const std::string& path) {
  auto lines = lines_of(slurp(path));
  if (lines.empty()) throw InvalidInput(path + ": missing header");
  std::vector<double> v;
  for (std::size_t r = 1; r < lines.size(); ++r) v.push_back(parse_double(lines[r]));
  return v;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::string& path, const Json& j) { spit(path, dump(j)); }

Json read_json(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

SolveConfig solve_config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  static const char* known[] = {"alpha", "grid", "theta", "tol", "maxIter", "otBackend", "epsilon", "seed"};
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* name : known) ok = ok || k == name;
    if (!ok) throw InvalidInput("unknown config key '" + k + "'");
  }
  SolveConfig c;
  try {
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("grid") && !j["grid"].is_null()) {
      const auto& g = j["grid"];
      c.grid = g.is_string() ? parse_grid_spec(g.get<std::string>()) : grid_from_json(g);
    }
    if (j.contains("theta")) c.theta = j["theta"].get<double>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("maxIter")) c.max_iter = j["maxIter"].get<int>();
    if (j.contains("otBackend")) c.backend = j["otBackend"].get<std::string>();
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<unsigned long>();
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  return c;
}

Json to_json(const SolveConfig& c) {
  return {{"alpha", c.alpha},
          {"grid", c.grid ? to_json(*c.grid) : Json(nullptr)},
          {"theta", c.theta},
          {"tol", c.tol},
          {"maxIter", c.max_iter},
          {"otBackend", c.backend},
          {"epsilon", c.epsilon},
          {"seed", c.seed}};
}

Json to_json(const SolveReport& r) {
  return {{"objectiveTrace", r.objective_trace},
          {"c0Trace", r.c0_trace},
          {"samResidualW1", r.sam_residual_w1},
          {"samDiameter", r.sam_diameter},
          {"knottSmithViolations", r.knott_smith_violations},
          {"singularMass", r.singular_mass},
          {"sphericalRatio", r.spherical_ratio},
          {"comparisonObjective", r.comparison_objective},
          {"iterations", r.iterations},
          {"rejectedSteps", r.rejected_steps},
          {"converged", r.converged}};
}

Json to_json(const NecessaryReport& r) {
  return {{"firstMoment", r.first_moment},
          {"firstMomentFinite", r.first_moment_finite},
          {"barycenterNorm", r.barycenter_norm},
          {"diameter", r.diameter},
          {"affineHullDim", r.affine_hull_dim},
          {"pass", r.pass},
          {"reason", r.reason}};
}

Json to_json(const IntegrabilityReport& r) {
  return {{"extents", r.extents},
          {"partial", r.partial},
          {"increments", r.increments},
          {"ratios", r.ratios},
          {"pass", r.pass}};
}

Json to_json(const BalanceReport& r, int dim) {
  auto vec = [dim](const Vec& v) {
    return dim == 2 ? Json::array({v[0], v[1]}) : Json::array({v[0]});
  };
  Json dirs = Json::array();
  for (const auto& d : r.directions) dirs.push_back(vec(d));
  return {{"directions", dirs},
          {"residuals", r.residuals},
          {"interior", vec(r.interior)},
          {"boundary", vec(r.boundary)},
          {"scale", r.scale},
          {"maxResidual", r.max_residual},
          {"pass", r.pass}};
}

}  // namespace alc::io
