// Command-line front end. Results go to stdout as JSON, artifacts to files.
// Exit codes: 0 success, 2 invalid input or failed precondition/check,
// 3 solver non-convergence, 1 anything unexpected.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "alc/alpha.hpp"
#include "alc/io.hpp"
#include "alc/kernels.hpp"
#include "alc/legendre.hpp"
#include "alc/minkowski.hpp"
#include "alc/transport.hpp"
#include "alc/verify.hpp"

using namespace alc;
using io::Json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNonConvergence = 3;

struct Options {
  unsigned long seed = 0;
  bool seed_set = false;
  int threads = 0;

  std::string input, input2, output;
  double alpha = -0.5;
  std::string dual_grid, bins, config;
  bool numeric = false, formula = false, both = false, spherical = false;
  std::string backend = "exact";
  double epsilon = 1e-2;
  std::string plan_out, potentials_out;
  std::string check;
  double p = 0.0;
  int l = 0;
  std::string extents = "10,20,40,80,160";
};

void emit(const Json& j) { std::cout << io::dump(j) << std::flush; }

Json vec_json(const Vec& v, int dim) {
  return dim == 2 ? Json::array({v[0], v[1]}) : Json::array({v[0]});
}

AlphaConcaveFunction load_function(const Options& o, const std::string& path) {
  return AlphaConcaveFunction(o.alpha, io::read_grid_function(path));
}

int cmd_legendre(const Options& o) {
  const GridFunction phi = io::read_grid_function(o.input);
  const Grid dual = o.dual_grid.empty() ? default_dual_grid(phi) : io::parse_grid_spec(o.dual_grid);
  const Conjugate c = conjugate(phi, dual);
  std::size_t finite = 0;
  double lo = kInf, hi = -kInf;
  for (double v : c.values.values())
    if (v < kInf) {
      ++finite;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!o.output.empty()) io::write_grid_function(o.output, c.values);
  emit({{"command", "legendre"},
        {"dualGrid", io::to_json(dual)},
        {"finiteNodes", finite},
        {"min", lo},
        {"max", hi}});
  return 0;
}

int cmd_mass(const Options& o) {
  const auto f = load_function(o, o.input);
  const Quadrature q = total_mass(f);
  emit({{"command", "mass"}, {"alpha", o.alpha}, {"J", q.value}, {"error", q.error}});
  return 0;
}

int cmd_variation(const Options& o) {
  const auto f = load_function(o, o.input);
  const auto g = load_function(o, o.input2);
  const bool all = o.both || (!o.numeric && !o.formula);
  Json out{{"command", "variation"}, {"alpha", o.alpha}};
  if (o.numeric || all) {
    const auto n = first_variation_numeric(f, g);
    out["numeric"] = {{"steps", n.steps}, {"quotients", n.quotients}, {"value", n.value}};
  }
  if (o.formula || all) {
    const auto v = first_variation_formula(f, g);
    out["formula"] = {{"interior", v.interior},
                      {"boundary", v.boundary},
                      {"value", v.total},
                      {"beta1", v.certificate.beta1},
                      {"beta2", v.certificate.beta2}};
  }
  if (out.contains("numeric") && out.contains("formula")) {
    const double a = out["numeric"]["value"], b = out["formula"]["value"];
    out["relativeDifference"] = std::abs(a - b) / (1.0 + std::abs(b));
  }
  emit(out);
  return 0;
}

int cmd_sam(const Options& o) {
  const auto f = load_function(o, o.input);
  DiscreteMeasure m;
  Json out{{"command", "sam"}, {"alpha", o.alpha}, {"spherical", o.spherical}};
  if (o.spherical) {
    const auto s = spherical_sam(f);
    m = s.measure;
    out["truncated"] = s.truncated;
  } else {
    std::optional<Grid> bins;
    if (!o.bins.empty()) bins = io::parse_grid_spec(o.bins);
    m = euclidean_sam(f, bins);
  }
  out["atoms"] = m.size();
  out["total"] = m.size() ? m.total() : 0.0;
  if (m.size()) out["barycenter"] = vec_json(m.barycenter(), m.dim);
  if (!o.output.empty()) io::write_measure(o.output, m);
  emit(out);
  return 0;
}

int cmd_ot(const Options& o) {
  const DiscreteMeasure rho = io::read_measure(o.input);
  const DiscreteMeasure mu = io::read_measure(o.input2);
  Json out{{"command", "ot"}, {"backend", o.backend}};
  if (o.backend == "exact") {
    const auto r = max_correlation_exact(rho, mu);
    out["T"] = r.value;
    out["dual"] = r.dual;
    out["gap"] = r.potentials.duality_gap;
    out["pivots"] = r.pivots;
    out["planEntries"] = r.plan.size();
    if (!o.plan_out.empty()) io::write_plan(o.plan_out, r.plan);
    if (!o.potentials_out.empty()) {
      io::write_column(o.potentials_out + "_phi.csv", "phi", r.potentials.phi);
      io::write_column(o.potentials_out + "_phi_star.csv", "phi_star", r.potentials.phi_star);
    }
  } else if (o.backend == "entropic") {
    const auto r = max_correlation_entropic(rho, mu, o.epsilon);
    out["T"] = r.value;
    out["epsilon"] = r.epsilon;
    out["bound"] = r.bound;
    out["marginalError"] = r.marginal_error;
    out["iterations"] = r.iterations;
    out["planEntries"] = r.plan.size();
    if (!o.plan_out.empty()) io::write_plan(o.plan_out, r.plan);
    if (!o.potentials_out.empty())
      io::write_column(o.potentials_out + "_phi_star.csv", "phi_star", r.phi_star);
  } else {
    throw InvalidInput("backend must be exact or entropic");
  }
  emit(out);
  return 0;
}

int cmd_solve(const Options& o, const CLI::App& sub) {
  const DiscreteMeasure mu = io::read_measure(o.input);
  SolveConfig cfg;
  if (!o.config.empty()) cfg = io::solve_config_from_json(io::read_json(o.config));
  if (sub.count("--alpha")) cfg.alpha = o.alpha;
  if (o.seed_set) cfg.seed = o.seed;
  const SolveResult r = solve(mu, cfg);
  Json out{{"command", "solve"},
           {"config", io::to_json(cfg)},
           {"report", io::to_json(r.report)},
           {"c0", r.c0},
           {"total", r.solution.total()},
           {"atoms", r.solution.atoms.size()}};
  if (!o.output.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(o.output);
    auto at = [&](const char* name) { return (fs::path(o.output) / name).string(); };
    io::write_grid_function(at("base.json"), r.solution.base);
    io::write_grid_function(at("density.json"), r.solution.density);
    io::write_grid_function(at("potential.json"), r.potential);
    DiscreteMeasure atoms = r.solution.atoms;
    atoms.dim = mu.dim;
    io::write_measure(at("atoms.csv"), atoms);
    io::write_measure(at("sam.csv"), r.sam);
    io::write_plan(at("plan.csv"), r.plan);
    io::write_json(at("report.json"), out);
  }
  emit(out);
  if (!r.report.converged) {
    std::cerr << "solve: no convergence within " << cfg.max_iter << " iterations\n";
    return kExitNonConvergence;
  }
  return 0;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t k = s.find(',', start);
    v.push_back(io::parse_double(s.substr(start, k == std::string::npos ? std::string::npos : k - start)));
    if (k == std::string::npos) break;
    start = k + 1;
  }
  return v;
}

int cmd_verify(const Options& o) {
  Json out{{"command", "verify"}, {"check", o.check}};
  bool pass = false;
  std::string reason;
  if (o.check == "necessary") {
    const auto r = check_necessary_conditions(io::read_measure(o.input));
    out["report"] = io::to_json(r);
    pass = r.pass;
    reason = r.reason;
  } else if (o.check == "integrability") {
    const auto r = check_integrability_trend(load_function(o, o.input), o.p, o.l, parse_list(o.extents));
    out["report"] = io::to_json(r);
    pass = r.pass;
    reason = "increments do not decay";
  } else if (o.check == "balance") {
    const auto f = load_function(o, o.input);
    const auto r = check_gradient_balance(f, o.seed);
    out["report"] = io::to_json(r, f.dim());
    pass = r.pass;
    reason = "balance residual above 1e-3 of the mass scale";
  } else {
    throw InvalidInput("unknown check '" + o.check + "' (necessary, integrability, balance)");
  }
  emit(out);
  if (!pass) {
    std::cerr << "verify: " << reason << "\n";
    return kExitInvalid;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-concave functions: transforms, variations, surface measures and the inverse problem"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--seed", o.seed, "seed for every randomized choice");
  app.add_option("--threads", o.threads, "thread cap for parallel kernels (env ALC_THREADS)");

  auto* leg = app.add_subcommand("legendre", "discrete convex conjugate of a grid function");
  leg->add_option("fn", o.input)->required()->check(CLI::ExistingFile);
  leg->add_option("--dual-grid", o.dual_grid, "min:max:count[,min:max:count]");
  leg->add_option("-o", o.output, "output grid function");

  auto* mass = app.add_subcommand("mass", "total mass of psi_alpha(base)");
  mass->add_option("fn", o.input)->required()->check(CLI::ExistingFile);
  mass->add_option("--alpha", o.alpha)->required();

  auto* var = app.add_subcommand("variation", "first variation of the total mass");
  var->add_option("f", o.input)->required()->check(CLI::ExistingFile);
  var->add_option("g", o.input2)->required()->check(CLI::ExistingFile);
  var->add_option("--alpha", o.alpha)->required();
  auto* modes = var->add_option_group("mode");
  modes->add_flag("--numeric", o.numeric);
  modes->add_flag("--formula", o.formula);
  modes->add_flag("--both", o.both);
  modes->require_option(0, 1);

  auto* sam = app.add_subcommand("sam", "surface area measure of psi_alpha(base)");
  sam->add_option("fn", o.input)->required()->check(CLI::ExistingFile);
  sam->add_option("--alpha", o.alpha)->required();
  sam->add_flag("--spherical", o.spherical);
  sam->add_option("--bins", o.bins, "bin grid min:max:count[,...] for the Euclidean measure");
  sam->add_option("-o", o.output, "measure CSV");

  auto* ot = app.add_subcommand("ot", "maximal correlation between two measures");
  ot->add_option("rho", o.input)->required()->check(CLI::ExistingFile);
  ot->add_option("mu", o.input2)->required()->check(CLI::ExistingFile);
  ot->add_option("--backend", o.backend)->check(CLI::IsMember({"exact", "entropic"}));
  ot->add_option("--epsilon", o.epsilon);
  ot->add_option("--plan", o.plan_out, "plan CSV");
  ot->add_option("--potentials", o.potentials_out, "prefix for potential CSVs");

  auto* sol = app.add_subcommand("solve", "recover an alpha-concave measure from mu");
  sol->add_option("mu", o.input)->required()->check(CLI::ExistingFile);
  sol->add_option("--alpha", o.alpha);
  sol->add_option("--config", o.config)->check(CLI::ExistingFile);
  sol->add_option("-o", o.output, "solution directory");

  auto* ver = app.add_subcommand("verify", "diagnostic checks");
  ver->add_option("target", o.input)->required()->check(CLI::ExistingFile);
  ver->add_option("--check", o.check)->required()->check(
      CLI::IsMember({"necessary", "integrability", "balance"}));
  ver->add_option("--alpha", o.alpha);
  ver->add_option("--p", o.p);
  ver->add_option("--l", o.l);
  ver->add_option("--extents", o.extents, "comma separated box half-widths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  o.seed_set = app.count("--seed") > 0;
  int threads = o.threads;
  if (threads <= 0)
    if (const char* env = std::getenv("ALC_THREADS")) threads = std::atoi(env);
  kernels::set_threads(threads);

  try {
    if (leg->parsed()) return cmd_legendre(o);
    if (mass->parsed()) return cmd_mass(o);
    if (var->parsed()) return cmd_variation(o);
    if (sam->parsed()) return cmd_sam(o);
    if (ot->parsed()) return cmd_ot(o);
    if (sol->parsed()) return cmd_solve(o, *sol);
    if (ver->parsed()) return cmd_verify(o);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
