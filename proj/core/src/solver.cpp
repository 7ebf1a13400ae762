#include "capflow/solver.hpp"

#include <cmath>
#include <numbers>

#include "capflow/errors.hpp"
#include "capflow/specfun.hpp"

namespace capflow {
namespace {

constexpr double kPi = std::numbers::pi;

double rel_diff(double a, double b) { return std::fabs(a - b) / std::fmax(std::fabs(b), 1e-300); }

}  // namespace

double c_q_closed(int d, double alpha0, const ExternalFieldSpec& field) {
  require_dimension(d);
  const double norm = no_field_normalizer(d, alpha0);
  if (std::holds_alternative<ZeroField>(field)) return norm;
  const Colatitude a = Colatitude::from_theta(alpha0);
  const double c2 = 0.5 * a.opc;
  const double s2 = 0.5 * a.omc;
  if (const auto* pc = std::get_if<PointCharge>(&field)) {
    const double k = pc->q * std::exp(0.5 * (d - 2) * std::numbers::ln2 + ln_gamma(0.5 * (d - 1)) -
                                      0.5 * std::log(kPi) - ln_gamma(0.5 * d - 1.0));
    return norm * (1.0 + k * inc_beta(c2, s2, 0.5 * (d - 2), 0.5));
  }
  if (std::holds_alternative<QuadraticField>(field)) {
    const double k = std::exp(d * std::numbers::ln2 + ln_gamma(0.5 * (d + 3)) - 0.5 * std::log(kPi) -
                              ln_gamma(0.5 * d + 1.0));
    return norm * (1.0 + k * inc_beta(c2, s2, 0.5 * d + 1.0, 0.5 * d));
  }
  throw UnsupportedFieldError("c_q_closed: no closed form for custom fields");
}

EquilibriumSolution solve(const ProblemSpec& spec, const QuadratureConfig& quad) {
  quad.validate();
  require_dimension(spec.d);
  const int d = spec.d;
  EquilibriumSolution sol;
  sol.d = d;
  sol.south_field = spec.field;
  sol.field = spec.pole == Pole::South ? spec.field : reflect_field(spec.field, d);
  sol.admissibility = check_south_cap_admissible(spec.field, d);

  // Support angle in the South frame.
  if (spec.alpha) {
    const double a = *spec.alpha;
    const double a_s = spec.pole == Pole::South ? a : kPi - a;
    if (!(a >= 0.0) || !(a <= kPi) || !(a_s < kPi)) {
      throw ConfigError("forced alpha must give a cap of positive measure");
    }
    sol.support.method = SupportMethod::UserForced;
    sol.support.alpha0 = a_s;
    sol.support.lo = sol.support.hi = sol.support.alpha0;
  } else if (const auto* pc = std::get_if<PointCharge>(&spec.field)) {
    sol.support = solve_alpha_point_charge(d, pc->q);
  } else if (std::holds_alternative<QuadraticField>(spec.field)) {
    sol.support = solve_alpha_quadratic(d);
  } else {
    if (!sol.admissibility.admissible) {
      throw ConfigError("field fails the South-cap admissibility check (" + sol.admissibility.diagnostics +
                        "); supply the support angle explicitly");
    }
    sol.support = solve_alpha_generic(d, spec.field, quad);
    if (sol.support.alpha0 >= kPi) {
      throw NonConvergenceError("support search collapsed onto the South Pole");
    }
  }
  const double alpha_s = sol.support.alpha0;
  const CapGeometry cap_s(Pole::South, alpha_s);

  const bool closed = is_builtin(spec.field);
  const AbelIntermediate abel = closed ? abel_closed(spec.field, d, cap_s) : abel_numeric(spec.field, d, cap_s, quad);
  sol.provenance = abel.provenance;

  const RobinConstants quad_constants = c_q_from_F(d, cap_s, abel.F_reg, quad);
  const bool at_critical = sol.support.method == SupportMethod::CharacteristicRoot ||
                           (std::holds_alternative<ZeroField>(spec.field) && alpha_s == 0.0);
  if (closed && at_critical) {
    sol.c_q = c_q_closed(d, alpha_s, spec.field);
    sol.discrepancies.push_back({"c_q_closed_vs_quadrature", rel_diff(quad_constants.c_q, sol.c_q), 1e-8,
                                 rel_diff(quad_constants.c_q, sol.c_q) <= 1e-8});
  } else {
    sol.c_q = quad_constants.c_q;
  }
  sol.f_q = robin_from_c_q(d, sol.c_q);

  if (sol.support.method != SupportMethod::UserForced) {
    const double f_fun = robin_from_functional(d, spec.field, alpha_s, quad);
    const double r = rel_diff(f_fun, sol.f_q);
    sol.discrepancies.push_back({"f_q_functional_vs_proportional", r, 1e-8, r <= 1e-8});
  }
  if (sol.support.method == SupportMethod::CharacteristicRoot) {
    sol.discrepancies.push_back({"characteristic_residual", sol.support.residual, 1e-12,
                                 sol.support.residual <= 1e-12});
    const SupportSolveResult m =
        minimize_functional([&](double a) { return f_functional_closed(d, a, spec.field); });
    const double da = std::fabs(m.alpha0 - alpha_s);
    sol.discrepancies.push_back({"alpha_root_vs_minimizer", da, 1e-6, da <= 1e-6});
  }

  sol.south_density = assemble_density(d, cap_s, sol.c_q, abel.F_reg);
  if (spec.pole == Pole::South) {
    sol.cap = cap_s;
    sol.density = sol.south_density;
  } else {
    sol.cap = cap_s.reflected();
    sol.density = assemble_density(d, sol.cap, sol.c_q, reflect_field_term(abel.F_reg));
  }
  sol.alpha0 = sol.cap.alpha;
  return sol;
}

EquilibriumSolution perturbed_claim(const EquilibriumSolution& sol, double delta, const QuadratureConfig& quad) {
  ProblemSpec spec;
  spec.d = sol.d;
  spec.field = sol.south_field;
  spec.pole = Pole::South;
  spec.alpha = sol.support.alpha0 + delta;
  EquilibriumSolution out = solve(spec, quad);
  if (sol.cap.pole == Pole::North) {
    out.field = sol.field;
    out.cap = out.cap.reflected();
    out.alpha0 = out.cap.alpha;
  }
  out.f_q = sol.f_q;
  out.discrepancies.clear();
  return out;
}

}  // namespace capflow
