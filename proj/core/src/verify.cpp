#include "capflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>

#include "capflow/errors.hpp"
#include "capflow/parallel.hpp"
#include "capflow/specfun.hpp"

namespace capflow {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

using RegDensity = std::function<double(const CapPoint&)>;

// Density of the solution seen from the South frame.
RegDensity south_reg(const EquilibriumSolution& sol) {
  return [&sol](const CapPoint& p) { return sol.south_density.regularized(p); };
}

double south_alpha(const EquilibriumSolution& sol) {
  return sol.cap.pole == Pole::South ? sol.cap.alpha : kPi - sol.cap.alpha;
}

double agm(double a, double b) {
  for (int i = 0; i < 64 && std::fabs(a - b) > 4.0 * std::numeric_limits<double>::epsilon() * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

// int_0^(pi/2) sin^n(phi) / sqrt(D + m^2 cos^2(phi)) d phi. The n = 0 part is a
// complete elliptic integral; the remainder has a bounded integrand even as D -> 0.
double phi_integral(int n, double D, double m, const QuadratureConfig& quad) {
  const double base = 0.5 * kPi / agm(std::sqrt(D + m * m), std::sqrt(D));
  if (n == 0) return base;
  auto f = [&](double phi, double phic) {
    const double c = phic > 0.0 ? std::sin(phic) : std::cos(phi);
    const double s_minus_1 = phic > 0.0 ? std::expm1(n * std::log1p(-2.0 * std::pow(std::sin(0.5 * phic), 2)))
                                         : std::expm1(n * std::log(std::sin(phi)));
    return s_minus_1 / std::sqrt(D + m * m * c * c);
  };
  return base + integrate_tanh_sinh(f, 0.0, kHalfPi, quad).value;
}

double wallis(int n) {
  // int_0^(pi/2) sin^n(phi) d phi
  return 0.5 * std::sqrt(kPi) * std::exp(ln_gamma(0.5 * (n + 1)) - ln_gamma(0.5 * n + 1.0));
}

// U(theta) for a South-cap density given by f_reg.
double potential_south(int d, double alpha, const RegDensity& f_reg, double theta, const QuadratureConfig& quad) {
  const Colatitude a = Colatitude::from_theta(alpha);
  const Colatitude th = Colatitude::from_theta(theta);
  const int n = d - 3;
  const double big_t = std::sqrt(a.opc);
  const bool on_support = theta > alpha;
  const double gap_th = on_support ? 2.0 * std::sin(0.5 * (theta + alpha)) * std::sin(0.5 * (theta - alpha)) : 0.0;
  const double t_th = std::sqrt(std::fmax(gap_th, 0.0));
  const double off_dist = on_support ? 0.0 : 2.0 * std::sin(0.5 * (alpha + theta)) * std::sin(0.5 * (alpha - theta));

  // t: outer variable; dist_t_end: T - t; dist_t_th: |t_theta - t| (unused off support).
  auto integrand = [&](double t, double dist_t_end, double dist_t_th) {
    CapPoint p;
    p.gap = t * t;
    p.eta = Colatitude::from_halves(a.omc + t * t, dist_t_end * (big_t + t));
    const double d_cos = on_support ? 2.0 * dist_t_th * (t_th + t) : 2.0 * (off_dist + t * t);
    const double ah = std::sqrt(th.omc * p.eta.opc);
    const double bh = std::sqrt(p.eta.omc * th.opc);
    const double big = std::fmax(ah, bh);
    const double small = std::fmin(ah, bh);
    if (big == 0.0) return 0.0;
    double k = 0.0;
    if (small == 0.0) {
      k = std::pow(big, -(d - 2)) * wallis(n);
    } else {
      k = std::pow(big, -n) * phi_integral(n, d_cos, small, quad);
    }
    const double sin_eta = p.eta.sin();
    const double jac = n == 0 ? 1.0 : std::pow(sin_eta, n);
    return 2.0 * f_reg(p) * jac * k;
  };

  double total = 0.0;
  if (on_support && t_th > 0.0) {
    total += integrate_tanh_sinh(
                 [&](double t, double xc) {
                   const double to_th = xc > 0.0 ? xc : t_th - t;
                   const double to_end = (t_th == big_t && xc > 0.0) ? xc : big_t - t;
                   return integrand(t, to_end, to_th);
                 },
                 0.0, t_th, quad)
                 .value;
    if (t_th < big_t) {
      total += integrate_tanh_sinh(
                   [&](double t, double xc) {
                     const double to_th = xc < 0.0 ? -xc : t - t_th;
                     const double to_end = xc > 0.0 ? xc : big_t - t;
                     return integrand(t, to_end, to_th);
                   },
                   t_th, big_t, quad)
                   .value;
    }
  } else {
    total = integrate_tanh_sinh(
                [&](double t, double xc) {
                  const double to_end = xc > 0.0 ? xc : big_t - t;
                  const double to_th = on_support ? t : 0.0;
                  return integrand(t, to_end, to_th);
                },
                0.0, big_t, quad)
                .value;
  }
  const double c = 4.0 * std::exp(0.5 * (d - 2) * std::log(kPi) - ln_gamma(0.5 * (d - 2)));
  return c * total;
}

double field_at(const EquilibriumSolution& sol, double theta) {
  return eval_field(sol.field, sol.d, theta);
}

}  // namespace

bool VerificationReport::passes(const VerificationThresholds& t) const {
  if (!sample_failures.empty()) return false;
  if (!(mass_residual <= t.mass)) return false;
  if (!(sup_onsupport_residual <= t.onsupport)) return false;
  if (!(sup_inner_residual <= t.inner_onsupport)) return false;
  if (!(min_offsupport_margin >= t.offsupport)) return false;
  return std::all_of(oracle_discrepancies.begin(), oracle_discrepancies.end(),
                     [](const NamedResidual& r) { return r.pass; });
}

double potential_eval(const EquilibriumSolution& sol, double theta, const QuadratureConfig& quad) {
  if (!(theta >= 0.0) || !(theta <= kPi)) throw DomainError("potential_eval: theta must lie in [0, pi]");
  const double th_s = sol.cap.pole == Pole::South ? theta : kPi - theta;
  return potential_south(sol.d, south_alpha(sol), south_reg(sol), th_s, quad);
}

double mass_oracle(const EquilibriumSolution& sol, const QuadratureConfig& quad) {
  const int d = sol.d;
  const Colatitude a = Colatitude::from_theta(south_alpha(sol));
  const double big_t = std::sqrt(a.opc);
  const RegDensity f = south_reg(sol);
  const double v = integrate_tanh_sinh(
                       [&](double t, double xc) {
                         const double to_end = xc > 0.0 ? xc : big_t - t;
                         CapPoint p;
                         p.gap = t * t;
                         p.eta = Colatitude::from_halves(a.omc + t * t, to_end * (big_t + t));
                         const double jac = d == 3 ? 1.0 : std::pow(p.eta.sin(), d - 3);
                         return 2.0 * f(p) * jac;
                       },
                       0.0, big_t, quad)
                       .value;
  return surface_area(d - 1) * v;
}

VerificationReport variational_check(const EquilibriumSolution& sol, const QuadratureConfig& quad, int n_samples,
                                     const VerifyOptions& opts) {
  if (n_samples < 1) throw ConfigError("variational_check: need at least one sample");
  VerificationReport rep;
  rep.oracle_discrepancies = sol.discrepancies;
  const bool south = sol.cap.pole == Pole::South;
  const double alpha = sol.cap.alpha;

  // Support interval [s_lo, s_hi] and the part of the sphere away from it.
  const double s_lo = south ? alpha : 0.0;
  const double s_hi = south ? kPi : alpha;
  const bool q_inf_north = !std::isfinite(field_at(sol, 0.0));
  const bool q_inf_south = !std::isfinite(field_at(sol, kPi));
  double o_lo = south ? (q_inf_north ? opts.pole_exclusion : 0.0) : alpha + opts.collar;
  double o_hi = south ? alpha - opts.collar : (q_inf_south ? kPi - opts.pole_exclusion : kPi);

  struct Sample {
    double theta;
    bool on;
    bool inner;
  };
  std::vector<Sample> samples;
  for (int i = 0; i < n_samples; ++i) {
    const double frac = (i + 0.5) / n_samples;  // measured from the cap edge
    const double theta = south ? s_lo + (s_hi - s_lo) * frac : s_hi - (s_hi - s_lo) * frac;
    samples.push_back({theta, true, frac >= 1.0 - opts.inner_fraction});
  }
  if (o_hi >= o_lo) {
    for (int i = 0; i < n_samples; ++i) {
      const double theta = n_samples == 1 ? 0.5 * (o_lo + o_hi) : o_lo + (o_hi - o_lo) * i / (n_samples - 1);
      samples.push_back({theta, false, false});
    }
  }

  std::vector<double> value(samples.size(), 0.0);
  std::vector<std::string> failure(samples.size());
  parallel_for(samples.size(), resolve_threads(quad.threads), [&](std::size_t i) {
    try {
      const double th = samples[i].theta;
      value[i] = potential_eval(sol, th, quad) + field_at(sol, th) - sol.f_q;
      if (!std::isfinite(value[i])) failure[i] = "non-finite potential";
    } catch (const std::exception& e) {
      failure[i] = e.what();
    }
  });

  rep.min_offsupport_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!failure[i].empty()) {
      rep.sample_failures.push_back("theta=" + std::to_string(samples[i].theta) + ": " + failure[i]);
      continue;
    }
    if (samples[i].on) {
      ++rep.onsupport_samples;
      const double r = std::fabs(value[i]) / std::fabs(sol.f_q);
      rep.sup_onsupport_residual = std::fmax(rep.sup_onsupport_residual, r);
      if (samples[i].inner) rep.sup_inner_residual = std::fmax(rep.sup_inner_residual, r);
    } else {
      ++rep.offsupport_samples;
      rep.min_offsupport_margin = std::fmin(rep.min_offsupport_margin, value[i]);
    }
  }
  if (rep.offsupport_samples == 0) rep.min_offsupport_margin = 0.0;

  try {
    rep.mass_residual = std::fabs(mass_oracle(sol, quad) - 1.0);
  } catch (const std::exception& e) {
    rep.mass_residual = 1.0;
    rep.sample_failures.push_back(std::string("mass: ") + e.what());
  }
  return rep;
}

double kernel_identity_check(double a, double b, double q, const QuadratureConfig& quad) {
  if (!(a > 0.0) || !(b > 0.0) || !(q >= 0.0)) throw DomainError("kernel_identity_check: need a, b > 0, q >= 0");
  if (a == b) throw DomainError("kernel_identity_check: requires a != b");
  const double diff2 = (a - b) * (a - b);
  const double lhs = integrate_tanh_sinh(
                         [&](double xi, double xc) {
                           const double sin_half = xc < 0.0 ? std::sin(-0.5 * xc) : std::sin(0.5 * xi);
                           const double s = xc > 0.0 ? std::sin(xc) : std::sin(xi);
                           const double den = diff2 + 4.0 * a * b * sin_half * sin_half;
                           const double num = q == 0.0 ? 1.0 : std::pow(s, 2.0 * q);
                           return num / std::pow(den, q + 0.5);
                         },
                         0.0, kPi, quad)
                         .value;
  const double m = std::fmin(a, b);
  const double big = std::fmax(a, b);
  const double rhs_int = integrate_tanh_sinh(
                             [&](double t, double xc) {
                               const double to_m = xc > 0.0 ? xc : m - t;
                               const double small2 = to_m * (m + t);
                               const double big2 = (big - m) * (big + m) + small2;
                               const double num = q == 0.0 ? 1.0 : std::pow(t, 2.0 * q);
                               return num / (std::sqrt(small2) * std::sqrt(big2));
                             },
                             0.0, m, quad)
                             .value;
  const double rhs = 2.0 * std::pow(a * b, -2.0 * q) * rhs_int;
  return std::fabs(lhs - rhs) / std::fabs(rhs);
}

double funk_hecke_check(int d, const QuadratureConfig& quad) {
  require_dimension(d);
  const int m = d - 1;  // the inner sphere S^(m-1) = S^(d-2)
  auto xi_form = [&](const std::function<double(double)>& k) {
    const double v = integrate_tanh_sinh(
                         [&](double xi, double xc) {
                           const double s = xc > 0.0 ? std::sin(xc) : std::sin(xi);
                           const double c = std::cos(xi);
                           return k(c) * (m == 2 ? 1.0 : std::pow(s, m - 2));
                         },
                         0.0, kPi, quad)
                         .value;
    return surface_area(m - 1) * v;
  };
  const double th = 1.0;
  const double et = 2.0;
  const double base = 2.0 - 2.0 * std::cos(th) * std::cos(et);
  const double cross = 2.0 * std::sin(th) * std::sin(et);
  const std::vector<std::function<double(double)>> kernels = {
      [](double) { return 1.0; },
      [](double t) { return t * t; },
      [&](double t) { return std::pow(base - cross * t, -0.5 * (d - 2)); },
  };
  double worst = 0.0;
  for (const auto& k : kernels) {
    const double a = funk_hecke_integral(k, m, quad);
    const double b = xi_form(k);
    worst = std::fmax(worst, std::fabs(a - b) / std::fabs(b));
  }
  const double exact_const = surface_area(m);
  worst = std::fmax(worst, std::fabs(funk_hecke_integral(kernels[0], m, quad) - exact_const) / exact_const);
  return worst;
}

std::vector<NamedResidual> oracle_self_tests(int d, const QuadratureConfig& quad) {
  std::vector<NamedResidual> out;
  double worst = 0.0;
  const double vals[] = {0.3, 1.0, 1.9};
  for (double a : vals) {
    for (double b : vals) {
      if (a == b) continue;
      for (double q : {0.0, 0.5, 1.0, 1.5}) worst = std::fmax(worst, kernel_identity_check(a, b, q, quad));
    }
  }
  out.push_back({"kernel_identity_grid", worst, 1e-8, worst <= 1e-8});
  const double fh = funk_hecke_check(d, quad);
  out.push_back({"funk_hecke", fh, 1e-8, fh <= 1e-8});
  return out;
}

std::string report_to_json(const VerificationReport& report, const EquilibriumSolution& sol,
                           const VerificationThresholds& thresholds) {
  nlohmann::ordered_json j;
  j["d"] = sol.d;
  j["field"] = field_name(sol.field);
  j["pole"] = pole_name(sol.cap.pole);
  j["alpha0"] = sol.alpha0;
  j["F_Q"] = sol.f_q;
  j["C_Q"] = sol.c_q;
  j["mass_residual"] = report.mass_residual;
  j["sup_onsupport_residual"] = report.sup_onsupport_residual;
  j["sup_inner_onsupport_residual"] = report.sup_inner_residual;
  j["min_offsupport_margin"] = report.min_offsupport_margin;
  j["onsupport_samples"] = report.onsupport_samples;
  j["offsupport_samples"] = report.offsupport_samples;
  auto list = nlohmann::ordered_json::array();
  for (const auto& r : report.oracle_discrepancies) {
    nlohmann::ordered_json e;
    e["name"] = r.name;
    e["value"] = r.value;
    e["threshold"] = r.threshold;
    e["pass"] = r.pass;
    list.push_back(e);
  }
  j["oracle_discrepancies"] = list;
  j["sample_failures"] = report.sample_failures;
  nlohmann::ordered_json th;
  th["mass"] = thresholds.mass;
  th["onsupport"] = thresholds.onsupport;
  th["inner_onsupport"] = thresholds.inner_onsupport;
  th["offsupport"] = thresholds.offsupport;
  j["thresholds"] = th;
  j["passed"] = report.passes(thresholds);
  return j.dump(2) + "\n";
}

}  // namespace capflow
