// radsob: command-line front end.
//
// Exit codes: 0 success, 1 validation failure, 2 input parse error,
// 3 numerical failure, 64 usage error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radsob/error.hpp"
#include "radsob/io.hpp"
#include "radsob/transform.hpp"
#include "radsob/variational.hpp"

using namespace radsob;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kInvalid = 1, kParse = 2, kNumeric = 3, kUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string manifold_path, profile_path, out, format = "json", grid, b_sweep;
  double rel_tol = 1e-10, eps = 0.5, c = 1.0, r_max = 10.0, ch_tol = 1e-10;
  int max_subdivisions = 2000;
  bool truncated = false;
};

struct Grid {
  double a = 0.0, b = 0.0;
  int n = 0;
  bool log = false;
};

// "a:b:n" or "a:b:nlog".
Grid parse_grid(const std::string& text) {
  Grid g;
  std::string rest = text;
  if (rest.size() > 3 && rest.compare(rest.size() - 3, 3, "log") == 0) {
    g.log = true;
    rest.resize(rest.size() - 3);
  }
  std::vector<std::string> parts;
  std::stringstream ss(rest);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  try {
    if (parts.size() != 3) throw std::invalid_argument("fields");
    std::size_t used = 0;
    g.a = std::stod(parts[0]);
    g.b = std::stod(parts[1]);
    g.n = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw UsageError("--grid expects a:b:n or a:b:nlog, got '" + text + "'");
  }
  if (!(g.b > g.a) || g.n < 2 || (g.log && !(g.a > 0.0))) {
    throw UsageError("--grid needs a < b, n >= 2 and a > 0 for log spacing");
  }
  return g;
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) {
    if (p.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": bad number '" + p + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " must not be empty");
  return out;
}

QuadratureConfig quad_config(const Options& o) {
  QuadratureConfig q;
  q.rel_tol = o.rel_tol;
  q.max_subdivisions = o.max_subdivisions;
  q.validate();
  return q;
}

ModelManifold load_manifold(const Options& o) { return parse_manifold(read_text(o.manifold_path)); }

void emit(const Options& o, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
  } else {
    write_atomic(o.out, content);
  }
}

std::string table_json(const CsvTable& t) {
  json j;
  json meta = json::array();
  for (const auto& m : t.metadata) meta.push_back(m);
  j["metadata"] = meta;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    json col = json::array();
    for (const auto& row : t.rows) {
      col.push_back(std::isfinite(row[c]) ? json(row[c]) : json(nullptr));
    }
    j["columns"][t.columns[c]] = col;
  }
  return j.dump(2) + "\n";
}

void emit_table(const Options& o, const CsvTable& t) { emit(o, o.format == "csv" ? to_csv(t) : table_json(t)); }

std::string header(const std::string& cmd, const ModelManifold& M) {
  return "radsob " + cmd + " manifold=" + M.label + " n=" + std::to_string(M.n) + " warp=" + M.psi.description();
}

int cmd_validate(const Options& o) {
  const ModelManifold M = load_manifold(o);
  const Grid g = o.grid.empty() ? Grid{1e-3, 20.0, 400, true} : parse_grid(o.grid);
  const ValidationReport rep = validate(M, make_grid(g.a, g.b, g.n, g.log), o.ch_tol);
  if (o.format == "csv") {
    std::ostringstream s;
    s << "# " << header("validate", M) << "\n# passed " << (rep.passed() ? "true" : "false") << "\n";
    s << "check,passed,margin,worst_r\n";
    for (const auto& c : rep.checks) {
      s << c.name << "," << (c.passed ? 1 : 0) << "," << format_double(c.margin) << ","
        << format_double(c.worst_r) << "\n";
    }
    emit(o, s.str());
  } else {
    emit(o, to_json(rep));
  }
  if (!rep.passed()) {
    for (const auto& c : rep.checks) {
      if (!c.passed) std::cerr << "check failed: " << c.name << " (margin " << c.margin << " at r = " << c.worst_r << ")\n";
    }
    return kInvalid;
  }
  return kOk;
}

int cmd_transform(const Options& o) {
  const ModelManifold M = load_manifold(o);
  RadialRange range;
  if (!o.grid.empty()) {
    const Grid g = parse_grid(o.grid);
    if (!(g.a > 0.0)) throw UsageError("transform grid must start above 0");
    range = {g.a, g.b, g.n};
  }
  const TransformTable T = build_transform(M, range, quad_config(o));
  CsvTable t;
  t.metadata = {header("transform", M), "inversion_error " + format_double(T.inversion_error())};
  t.columns = {"r", "s", "rho", "varrho", "v", "Sigma", "Sigma_E"};
  for (const auto& row : T.rows()) t.rows.push_back({row.r, row.s, row.rho, row.varrho, row.v, row.sigma, row.sigma_e});
  emit_table(o, t);
  return kOk;
}

int cmd_shoot(const Options& o) {
  const ModelManifold M = load_manifold(o);
  OdeConfig cfg;
  cfg.rel_tol = std::min(o.rel_tol, 1e-10);
  const ShootingResult res = shoot(M, o.c, o.r_max, cfg, quad_config(o));
  if (res.status == ShootingStatus::maxed_out) throw Error(ErrorKind::max_steps, "shoot: step budget exhausted");
  const Grid g = o.grid.empty() ? Grid{0.0, res.r_end, 201, false} : parse_grid(o.grid);
  const RadialProfile ref = normalized_bubble(M.n, o.c);
  CsvTable t;
  t.metadata = {header("shoot", M), "c " + format_double(o.c), "status " + to_string(res.status),
                "r_end " + format_double(res.r_end), "energy_balance " + format_double(res.energy_balance),
                "boundary_flux " + format_double(res.boundary_flux)};
  t.columns = {"r", "u", "du", "u_euclidean_reference"};
  for (double r : make_grid(g.a, std::min(g.b, res.r_end), g.n, g.log)) {
    t.rows.push_back({r, res.solution.value(r), res.solution.derivative(r), ref.value(r)});
  }
  emit_table(o, t);
  return kOk;
}

int cmd_quotient(const Options& o) {
  const ModelManifold M = load_manifold(o);
  const QuadratureConfig q = quad_config(o);
  CsvTable t;
  t.metadata = {header("quotient", M), "c_e_reference " + format_double(euclidean_best_constant(M.n))};
  t.columns = {"b", "quotient", "quadrature_error"};
  if (!o.profile_path.empty()) {
    const RadialProfile f = parse_profile(read_text(o.profile_path), M.n);
    const FunctionalValue v = sobolev_quotient(M, f, q);
    t.metadata.push_back("profile " + f.description);
    t.rows.push_back({f.b, v.value, v.quadrature_error});
  } else {
    if (o.b_sweep.empty()) throw UsageError("quotient needs --profile or --b-sweep");
    for (double b : parse_list(o.b_sweep, "--b-sweep")) {
      const RadialProfile f = o.truncated ? truncated_at_profile(M.n, b, o.eps) : aubin_talenti(M.n, b);
      const FunctionalValue v = sobolev_quotient(M, f, q);
      t.rows.push_back({b, v.value, v.quadrature_error});
    }
  }
  emit_table(o, t);
  return kOk;
}

int cmd_symmetrize(const Options& o) {
  const ModelManifold M = load_manifold(o);
  if (o.profile_path.empty()) throw UsageError("symmetrize needs --profile");
  const RadialProfile f = parse_profile(read_text(o.profile_path), M.n);
  const QuadratureConfig q = quad_config(o);
  RadialRange range;
  range.r_max = std::isfinite(f.support_radius) ? std::max(1.0, f.support_radius) : 50.0;
  range.nodes = 600;
  const TransformTable T = build_transform(M, range, q);
  const RadialProfile g = schwarz_symmetrize(T, f);
  const ModelManifold E = euclidean_space(M.n);
  CsvTable t;
  t.metadata = {header("symmetrize", M), "profile " + f.description};
  for (double p : {2.0, 4.0, critical_exponent(M.n)}) {
    t.metadata.push_back("lp p=" + format_double(p) + " manifold " + format_double(lp_norm(M, f, p, q).value) +
                         " symmetrized " + format_double(lp_norm(E, g, p, q).value));
  }
  t.metadata.push_back("grad manifold " + format_double(grad_l2_norm(M, f, q).value) + " symmetrized " +
                       format_double(grad_l2_norm(E, g, q).value));
  t.columns = {"r", "varrho", "f", "df", "df_symmetrized"};
  const double hi = std::min(T.r_max(), f.support_radius);
  const Grid gr = o.grid.empty() ? Grid{T.r_min(), hi, 200, true} : parse_grid(o.grid);
  for (double r : make_grid(gr.a, gr.b, gr.n, gr.log)) {
    const double v = T.varrho(r);
    t.rows.push_back({r, v, f.value(r), f.derivative(r), g.derivative(v)});
  }
  emit_table(o, t);
  return kOk;
}

int cmd_rigidity(const Options& o) {
  if (o.b_sweep.empty()) throw UsageError("--b-sweep must not be empty");
  const std::vector<double> b = parse_list(o.b_sweep, "--b-sweep");
  const ModelManifold M = load_manifold(o);
  RigidityConfig cfg;
  cfg.quad = quad_config(o);
  cfg.eps = o.eps;
  const RigidityReport rep = rigidity_experiment(M, b, cfg);
  if (o.format == "csv") {
    if (o.out.empty()) throw UsageError("rigidity --format csv needs --out as a file prefix");
    for (const auto& [name, table] : to_csv_tables(rep)) write_atomic(o.out + "." + name + ".csv", to_csv(table));
  } else {
    emit(o, to_json(rep));
  }
  if (!rep.curve_errors.empty()) {
    for (const auto& [curve, msg] : rep.curve_errors) std::cerr << "curve " << curve << " failed: " << msg << "\n";
    return kNumeric;
  }
  return kOk;
}

int classify(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::parse:
    case ErrorKind::domain: return kParse;
    default: return kNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial Sobolev quotients on Cartan-Hadamard model manifolds"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub, bool needs_manifold = true) {
    auto* m = sub->add_option("--manifold", o.manifold_path, "manifold JSON file");
    if (needs_manifold) m->required();
    sub->add_option("--out", o.out, "output file (stdout if omitted)");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    sub->add_option("--max-subdivisions", o.max_subdivisions, "quadrature subdivision budget");
    sub->add_option("--grid", o.grid, "a:b:n or a:b:nlog");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check class F, convexity and comparison inequalities");
  common(validate_cmd);
  validate_cmd->add_option("--ch-tol", o.ch_tol, "tolerance for the inequality checks");
  auto* transform_cmd = app.add_subcommand("transform", "tabulate s(r), rho, varrho, Sigma and Sigma_E");
  common(transform_cmd);
  auto* shoot_cmd = app.add_subcommand("shoot", "integrate the radial Euler-Lagrange equation");
  common(shoot_cmd);
  shoot_cmd->add_option("--c", o.c, "initial height u(0)");
  shoot_cmd->add_option("--r-max", o.r_max, "end of the integration range");
  auto* quotient_cmd = app.add_subcommand("quotient", "Sobolev quotient of a profile or an AT sweep");
  common(quotient_cmd);
  quotient_cmd->add_option("--profile", o.profile_path, "profile JSON file");
  quotient_cmd->add_option("--b-sweep", o.b_sweep, "comma separated AT parameters");
  auto* eps_opt = quotient_cmd->add_option("--eps", o.eps, "truncation radius (truncated AT sweep when given)");
  auto* sym_cmd = app.add_subcommand("symmetrize", "Schwarz symmetrization onto R^n");
  common(sym_cmd);
  sym_cmd->add_option("--profile", o.profile_path, "profile JSON file");
  auto* rig_cmd = app.add_subcommand("rigidity", "deficit curves and the Euclidean verdict");
  common(rig_cmd);
  rig_cmd->add_option("--b-sweep", o.b_sweep, "comma separated AT parameters")->required();
  rig_cmd->add_option("--eps", o.eps, "truncation radius for the truncated curve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  o.truncated = eps_opt->count() > 0;

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*transform_cmd) return cmd_transform(o);
    if (*shoot_cmd) return cmd_shoot(o);
    if (*quotient_cmd) return cmd_quotient(o);
    if (*sym_cmd) return cmd_symmetrize(o);
    if (*rig_cmd) return cmd_rigidity(o);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return classify(e);
  }
  return kUsage;
}
