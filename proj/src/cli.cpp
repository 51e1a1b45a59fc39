#include "prc/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "prc/curvature.hpp"
#include "prc/subalgebras.hpp"
#include "prc/sweep.hpp"

namespace prc::cli {

using json = nlohmann::ordered_json;

namespace {

struct Common {
  std::string builtin;
  std::string space;
  std::string T;
  std::string format = "json";
  std::uint64_t seed = 0;
  int restarts = 16;
  unsigned workers = 1;
};

void add_space_options(CLI::App* cmd, Common& c, bool needs_T) {
  auto* b = cmd->add_option("--builtin", c.builtin, "built-in space name");
  auto* f = cmd->add_option("--space", c.space, "space description file (JSON)");
  b->excludes(f);
  auto* t = cmd->add_option("--T", c.T, "tensor coefficients z1,z2,... (rationals allowed)");
  if (needs_T) t->required();
  cmd->add_option("--seed", c.seed, "restart shift seed (0 = plain sequence)");
  cmd->add_option("--restarts", c.restarts, "multistart count")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
}

HomogeneousSpaceSpec load(const Common& c) {
  if (c.builtin.empty() == c.space.empty()) {
    throw InputError("exactly one of --builtin or --space is required");
  }
  return c.builtin.empty() ? load_space_file(c.space) : builtin_space(c.builtin);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(parse_rational(item));
    } catch (const InputError& e) {
      throw InputError(std::string("T[") + std::to_string(out.size()) + "]: " + e.what());
    }
  }
  return out;
}

SolverOptions solver_options(const Common& c) {
  SolverOptions o;
  o.restarts = c.restarts;
  o.seed = c.seed;
  o.workers = c.workers;
  return o;
}

json number(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

json sigma_json(const SigmaResult& r) {
  json j;
  j["J"] = r.J.one_based();
  j["value"] = r.value;
  j["attained"] = r.attained;
  j["source"] = to_string(r.source);
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  return j;
}

void check_format(const std::string& f) {
  if (f != "json" && f != "csv") throw InputError("--format must be json or csv");
}

int cmd_catalog(const std::string& action, const std::string& name, std::ostream& out) {
  if (action == "list") {
    json names = builtin_names();
    out << names.dump(2) << "\n";
    return kExitOk;
  }
  if (action == "show") {
    if (name.empty()) throw InputError("catalog show needs a NAME");
    out << dump_space_spec(builtin_space(name)) << "\n";
    return kExitOk;
  }
  throw InputError("catalog action must be list or show");
}

int cmd_check(const Common& c, std::ostream& out) {
  check_format(c.format);
  const auto spec = load(c);
  const auto z = checked_tensor(spec, parse_list(c.T));
  const auto v = existence_check(spec, z, solver_options(c));
  if (c.format == "csv") {
    out << "status,apical,sigma,margin\n"
        << to_string(v.status) << "," << (v.apical ? format_apical(*v.apical) : "") << ","
        << (v.sigma ? format_number(v.sigma->value) : "") << "," << format_number(v.margin) << "\n";
  } else {
    out << verdict_json(spec, v, z) << "\n";
  }
  return kExitOk;
}

int cmd_sigma(const Common& c, std::ostream& out) {
  check_format(c.format);
  const auto spec = load(c);
  const auto z = checked_tensor(spec, parse_list(c.T));
  SigmaContext ctx(spec, z, solver_options(c));
  const auto lattice = intermediate_subalgebras(spec);
  if (c.format == "csv") {
    out << "J,sigma,attained,source,witness\n";
    for (const auto& J : lattice.all_proper) {
      const auto& r = ctx.sigma(J);
      std::string w;
      if (r.witness) {
        for (double y : *r.witness) w += (w.empty() ? "" : " ") + format_number(y);
      }
      out << format_apical(J) << "," << format_number(r.value) << ","
          << (r.attained ? "true" : "false") << "," << to_string(r.source) << "," << w << "\n";
    }
    return kExitOk;
  }
  json rows = json::array();
  for (const auto& J : lattice.all_proper) rows.push_back(sigma_json(ctx.sigma(J)));
  json doc;
  doc["space"] = spec.name();
  doc["T"] = std::vector<double>(z.values().begin(), z.values().end());
  doc["maximal"] = json::array();
  for (const auto& J : lattice.maximal) doc["maximal"].push_back(J.one_based());
  doc["subalgebras"] = rows;
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_solve(const Common& c, std::ostream& out) {
  check_format(c.format);
  const auto spec = load(c);
  const auto z = checked_tensor(spec, parse_list(c.T));
  const auto best = maximize_S_on_MT(spec, z, solver_options(c));
  const MetricCoefficients x(best.argmax);
  const auto check = verify_prescribed_ricci(spec, x, z);
  if (c.format == "csv") {
    out << "x,S,c,residual,verified\n";
    std::string xs;
    for (double v : best.argmax) xs += (xs.empty() ? "" : " ") + format_number(v);
    out << xs << "," << format_number(best.value) << "," << format_number(check.c) << ","
        << format_number(check.residual) << "," << (check.verified() ? "true" : "false") << "\n";
    return kExitOk;
  }
  json doc;
  doc["x"] = best.argmax;
  doc["S"] = best.value;
  doc["c"] = check.c;
  doc["residual"] = check.residual;
  doc["verified"] = check.verified();
  doc["first_order_residual"] = best.first_order_residual;
  doc["constraint_error"] = best.constraint_error;
  doc["converged_restarts"] = best.converged_restarts;
  doc["restarts"] = best.restarts_used;
  doc["alternatives"] = best.alternatives;
  out << doc.dump(2) << "\n";
  return kExitOk;
}

int cmd_sweep(const Common& c, const std::vector<std::string>& axes, bool solve, bool normalize,
              std::ostream& out) {
  if (c.format != "csv") throw InputError("sweep supports --format csv only");
  const auto spec = load(c);
  SweepGrid grid;
  grid.base = parse_list(c.T);
  for (const auto& a : axes) grid.axes.push_back(parse_grid_axis(a));
  grid.normalize = normalize;
  grid.validate(spec);
  checked_tensor(spec, grid.base);
  SweepOptions opts;
  opts.solver = solver_options(c);
  opts.solve = solve;
  opts.workers = c.workers;
  out << emit_sweep(spec, grid, opts);
  return kExitOk;
}

}  // namespace

std::string verdict_json(const HomogeneousSpaceSpec& spec, const ExistenceVerdict& v,
                         const TensorCoefficients& z) {
  json doc;
  doc["space"] = spec.name();
  doc["T"] = std::vector<double>(z.values().begin(), z.values().end());
  doc["status"] = to_string(v.status);
  doc["apical"] = v.apical ? json(v.apical->one_based()) : json(nullptr);
  doc["sigma"] = v.sigma ? sigma_json(*v.sigma) : json(nullptr);
  doc["lhs"] = number(v.lhs);
  doc["rhs"] = number(v.rhs);
  doc["margin"] = number(v.margin);
  doc["apical_candidates"] = json::array();
  for (const auto& J : v.apical_candidates) doc["apical_candidates"].push_back(J.one_based());
  if (spec.is_wallach_shape()) {
    const auto d = spec.d();
    const auto w = wallach_existence_check({d[0], d[1], d[2]}, spec.triples()(0, 1, 2), z);
    json wj;
    wj["p"] = w.wallach_p ? json(*w.wallach_p) : json(nullptr);
    wj["status"] = to_string(w.status);
    doc["wallach"] = wj;
  }
  return doc.dump(2);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prescribed Ricci curvature on homogeneous spaces with inequivalent isotropy summands"};
  app.name("prc");
  app.require_subcommand(1);

  std::string action, name;
  auto* catalog = app.add_subcommand("catalog", "built-in spaces");
  catalog->add_option("action", action, "list | show")->required();
  catalog->add_option("name", name, "space name for show");

  Common c_check, c_sigma, c_solve, c_sweep;
  auto* check = app.add_subcommand("check", "existence verdict as JSON");
  add_space_options(check, c_check, true);
  check->add_option("--format", c_check.format, "json | csv");

  auto* sig = app.add_subcommand("sigma", "sigma for every intermediate subalgebra");
  add_space_options(sig, c_sigma, true);
  sig->add_option("--format", c_sigma.format, "json | csv");

  auto* solve = app.add_subcommand("solve", "maximise S on M_T and verify Ric = cT");
  add_space_options(solve, c_solve, true);
  solve->add_option("--format", c_solve.format, "json | csv");

  std::vector<std::string> axes;
  bool do_solve = false, normalize = false;
  c_sweep.format = "csv";
  auto* sweep = app.add_subcommand("sweep", "verdicts over a grid of T");
  add_space_options(sweep, c_sweep, true);
  sweep->add_option("--grid", axes, "axis i=min:max:steps or i=value (repeatable)")->required();
  sweep->add_flag("--solve", do_solve, "also solve and verify at each point");
  sweep->add_flag("--normalize", normalize, "rescale each point to sum d_i z_i = 1");
  sweep->add_option("--format", c_sweep.format, "csv");

  std::vector<std::string> argv_store;
  argv_store.push_back("prc");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*catalog) return cmd_catalog(action, name, out);
    if (*check) return cmd_check(c_check, out);
    if (*sig) return cmd_sigma(c_sigma, out);
    if (*solve) return cmd_solve(c_solve, out);
    if (*sweep) return cmd_sweep(c_sweep, axes, do_solve, normalize, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace prc::cli
