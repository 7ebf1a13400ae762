#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>
#include <vector>

#include "capflow/equilibrium.hpp"
#include "capflow/errors.hpp"
#include "capflow/fields.hpp"
#include "capflow/functional.hpp"
#include "capflow/solver.hpp"
#include "capflow/verify.hpp"

namespace capflow::cli {
namespace {

constexpr double kPi = std::numbers::pi;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Format format_of(const CliConfig& c) {
  if (c.format) return *c.format;
  return c.command == Command::Solve || c.command == Command::Verify ? Format::Json : Format::Csv;
}

void add_common(CLI::App* sub, CliConfig& c, bool& degrees) {
  sub->add_option("--d", c.d, "ambient dimension (sphere S^(d-1)), d >= 3");
  sub->add_option("--field", c.field, "zero | point-charge | quadratic | custom")
      ->check(CLI::IsMember({"zero", "point-charge", "quadratic", "custom"}));
  sub->add_option("--q", c.q, "point-charge strength");
  sub->add_option("--field-file", c.field_file, "two-column CSV (theta, Q) for a custom field");
  sub->add_option("--alpha", c.alpha, "support angle override");
  sub->add_flag("--degrees", degrees, "read --alpha in degrees");
  sub->add_option("--pole", c.pole, "cap centre: south | north")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Pole>{{"south", Pole::South}, {"north", Pole::North}},
                                          CLI::ignore_case));
  sub->add_option("--points", c.points, "grid or sample count");
  sub->add_option("--tol", c.tol, "oracle quadrature tolerance");
  sub->add_option("--format", c.format, "csv | json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::Csv}, {"json", Format::Json}},
                                          CLI::ignore_case));
  sub->add_option("--output", c.output, "write the primary output to this file");
}

void validate(const CliConfig& c) {
  if (c.d < 3) throw ConfigError("--d must be at least 3");
  if (c.points < 1) throw ConfigError("--points must be positive");
  if (c.tol && !(*c.tol > 0.0 && *c.tol <= 1e-6)) throw ConfigError("--tol must lie in (0, 1e-6]");
  if (c.field_file && !c.field.empty() && c.field != "custom") throw ConfigError("--field-file requires --field custom");
  if (c.field == "custom" && !c.field_file) throw ConfigError("--field custom requires --field-file");
  const bool pc = c.field == "point-charge";
  if (pc && !c.q) throw ConfigError("--field point-charge requires --q");
  if (pc && !(*c.q > 0.0 && std::isfinite(*c.q))) throw ConfigError("--q must be a positive number");
  if (!pc && c.q) throw ConfigError("--q only applies to --field point-charge");
  if (c.alpha && !(*c.alpha >= 0.0 && *c.alpha <= kPi)) throw ConfigError("--alpha must lie in [0, pi]");
  if (c.command == Command::Capacity) {
    if (!c.alpha) throw ConfigError("capacity requires --alpha");
    if (!(*c.alpha > 0.0)) throw ConfigError("capacity requires --alpha > 0");
  }
  if (c.report && c.command != Command::Verify) throw ConfigError("--report only applies to verify");
}

ExternalFieldSpec build_field(const CliConfig& c) {
  if (c.field_file) return load_field_csv(*c.field_file);
  if (c.field == "point-charge") return make_point_charge(*c.q);
  if (c.field == "quadratic") return QuadraticField{};
  return ZeroField{};
}

QuadratureConfig build_quad(const CliConfig& c) {
  QuadratureConfig quad;
  if (c.tol) quad.oracle_tol = *c.tol;
  quad.validate();
  return quad;
}

ProblemSpec build_problem(const CliConfig& c) {
  ProblemSpec spec;
  spec.d = c.d;
  spec.field = build_field(c);
  spec.pole = c.pole;
  spec.alpha = c.alpha;
  return spec;
}

void emit_table(std::ostream& os, Format fmt, const char* xname, const char* yname, const std::vector<double>& x,
                const std::vector<double>& y, nlohmann::ordered_json meta) {
  if (fmt == Format::Csv) {
    os << xname << ',' << yname << '\n';
    for (std::size_t i = 0; i < x.size(); ++i) os << g17(x[i]) << ',' << g17(y[i]) << '\n';
    return;
  }
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < x.size(); ++i) {
    nlohmann::ordered_json r;
    r[xname] = x[i];
    r[yname] = y[i];
    rows.push_back(r);
  }
  meta["rows"] = rows;
  os << meta.dump(2) << '\n';
}

nlohmann::ordered_json solution_meta(const EquilibriumSolution& sol) {
  nlohmann::ordered_json j;
  j["d"] = sol.d;
  j["field"] = field_name(sol.field);
  j["pole"] = pole_name(sol.cap.pole);
  j["alpha0"] = sol.alpha0;
  return j;
}

int cmd_solve(const CliConfig& c, std::ostream& os) {
  const EquilibriumSolution sol = solve(build_problem(c), build_quad(c));
  const double alpha_actual = sol.alpha0;
  if (format_of(c) == Format::Csv) {
    os << "d,field,alpha0,method,residual,F_Q,C_Q\n";
    os << sol.d << ',' << field_name(sol.field) << ',' << g17(alpha_actual) << ','
       << method_name(sol.support.method) << ',' << g17(sol.support.residual) << ',' << g17(sol.f_q) << ','
       << g17(sol.c_q) << '\n';
    return kOk;
  }
  nlohmann::ordered_json j;
  j["d"] = sol.d;
  j["field"] = field_name(sol.field);
  j["alpha0"] = alpha_actual;
  j["method"] = method_name(sol.support.method);
  j["residual"] = sol.support.residual;
  j["F_Q"] = sol.f_q;
  j["C_Q"] = sol.c_q;
  os << j.dump(2) << '\n';
  return kOk;
}

int cmd_density(const CliConfig& c, std::ostream& os) {
  const QuadratureConfig quad = build_quad(c);
  const EquilibriumSolution sol = solve(build_problem(c), quad);
  const double delta = quad.edge_window;
  const bool south = sol.cap.pole == Pole::South;
  const double lo = south ? sol.alpha0 + delta : 0.0;
  const double hi = south ? kPi : sol.alpha0 - delta;
  if (!(hi >= lo)) throw ConfigError("support is narrower than the edge window");
  std::vector<double> eta(c.points), f(c.points);
  for (int i = 0; i < c.points; ++i) {
    eta[i] = c.points == 1 ? lo : lo + (hi - lo) * i / (c.points - 1);
    f[i] = sol.density(eta[i]);
  }
  emit_table(os, format_of(c), "eta_radians", "f_eta", eta, f, solution_meta(sol));
  return kOk;
}

int cmd_capacity(const CliConfig& c, std::ostream& os) {
  const double alpha_s = c.pole == Pole::South ? *c.alpha : kPi - *c.alpha;
  if (!(alpha_s > 0.0)) throw ConfigError("capacity requires a cap smaller than the sphere minus a point");
  const double cap = cap_capacity(c.d, alpha_s);
  if (format_of(c) == Format::Csv) {
    os << "d,alpha_radians,capacity\n" << c.d << ',' << g17(*c.alpha) << ',' << g17(cap) << '\n';
  } else {
    nlohmann::ordered_json j;
    j["d"] = c.d;
    j["alpha_radians"] = *c.alpha;
    j["capacity"] = cap;
    os << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_sweep(const CliConfig& c, std::ostream& os) {
  const QuadratureConfig quad = build_quad(c);
  const ExternalFieldSpec field = build_field(c);
  const bool south = c.pole == Pole::South;
  const ExternalFieldSpec south_field = south ? field : reflect_field(field, c.d);
  std::vector<double> alphas(c.points), alphas_s(c.points);
  for (int i = 0; i < c.points; ++i) {
    alphas[i] = kPi * (i + 0.5) / c.points;
    alphas_s[i] = south ? alphas[i] : kPi - alphas[i];
  }
  const std::vector<double> values = f_functional_sweep(c.d, south_field, alphas_s, quad);
  nlohmann::ordered_json meta;
  meta["d"] = c.d;
  meta["field"] = field_name(field);
  meta["pole"] = pole_name(c.pole);
  emit_table(os, format_of(c), "alpha_radians", "F_value", alphas, values, meta);
  return kOk;
}

int cmd_verify(const CliConfig& c, std::ostream& os, std::ostream& err) {
  const QuadratureConfig quad = build_quad(c);
  const EquilibriumSolution sol = solve(build_problem(c), quad);
  VerificationReport rep = variational_check(sol, quad, c.points, {});
  for (auto& r : oracle_self_tests(c.d, quad)) rep.oracle_discrepancies.push_back(r);
  const VerificationThresholds thresholds;
  const bool ok = rep.passes(thresholds);
  std::string text;
  if (format_of(c) == Format::Json) {
    text = report_to_json(rep, sol, thresholds);
  } else {
    std::ostringstream s;
    s << std::boolalpha << "name,value,threshold,pass\n";
    s << "mass_residual," << g17(rep.mass_residual) << ',' << g17(thresholds.mass) << ','
      << (rep.mass_residual <= thresholds.mass) << '\n';
    s << "sup_onsupport_residual," << g17(rep.sup_onsupport_residual) << ',' << g17(thresholds.onsupport) << ','
      << (rep.sup_onsupport_residual <= thresholds.onsupport) << '\n';
    s << "sup_inner_onsupport_residual," << g17(rep.sup_inner_residual) << ',' << g17(thresholds.inner_onsupport)
      << ',' << (rep.sup_inner_residual <= thresholds.inner_onsupport) << '\n';
    s << "min_offsupport_margin," << g17(rep.min_offsupport_margin) << ',' << g17(thresholds.offsupport) << ','
      << (rep.min_offsupport_margin >= thresholds.offsupport) << '\n';
    for (const auto& r : rep.oracle_discrepancies)
      s << r.name << ',' << g17(r.value) << ',' << g17(r.threshold) << ',' << r.pass << '\n';
    text = s.str();
  }
  if (c.report) {
    std::ofstream f(*c.report);
    if (!f) throw ConfigError("cannot open report file " + *c.report);
    f << text;
    os << (ok ? "PASS" : "FAIL") << '\n';
  } else {
    os << text;
  }
  for (const auto& s : rep.sample_failures) err << "sample failure: " << s << '\n';
  return ok ? kOk : kVerificationFailed;
}

int dispatch(const CliConfig& c, std::ostream& os, std::ostream& err) {
  switch (c.command) {
    case Command::Solve:
      return cmd_solve(c, os);
    case Command::Density:
      return cmd_density(c, os);
    case Command::Capacity:
      return cmd_capacity(c, os);
    case Command::FfuncSweep:
      return cmd_sweep(c, os);
    case Command::Verify:
      return cmd_verify(c, os, err);
  }
  return kConfigError;
}

}  // namespace

std::optional<int> parse_cli(int argc, const char* const* argv, CliConfig& config, std::ostream& out,
                             std::ostream& err) {
  CLI::App app{"Equilibrium measures on spherical caps"};
  app.require_subcommand(1);
  bool degrees = false;
  struct Entry {
    const char* name;
    const char* help;
    Command cmd;
  };
  const std::vector<Entry> cmds = {
      {"solve", "support angle and Robin constants", Command::Solve},
      {"density", "equilibrium density on a grid over the support", Command::Density},
      {"capacity", "Newtonian capacity of a cap", Command::Capacity},
      {"ffunc-sweep", "F-functional over a grid of support angles", Command::FfuncSweep},
      {"verify", "independent checks of a solution; exit 1 on failure", Command::Verify},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, cmd] : cmds) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, config, degrees);
    if (cmd == Command::Verify) sub->add_option("--report", config.report, "write the report JSON here");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) config.command = cmds[i].cmd;
  }
  if (degrees && config.alpha) config.alpha = *config.alpha * kPi / 180.0;
  return std::nullopt;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.output) {
      std::ofstream f(config.output->c_str());
      if (!f) throw ConfigError("cannot open output file " + *config.output);
      const int code = dispatch(config, f, err);
      f.flush();
      return code;
    }
    return dispatch(config, out, err);
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  }
}

}  // namespace capflow::cli
