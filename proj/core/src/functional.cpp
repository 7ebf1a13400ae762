#include "capflow/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "capflow/equilibrium.hpp"
#include "capflow/errors.hpp"
#include "capflow/parallel.hpp"
#include "capflow/specfun.hpp"

namespace capflow {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

double lg(double x) { return ln_gamma(x); }

void require_open_alpha(double alpha) {
  if (!(alpha >= 0.0) || !(alpha < kPi)) {
    throw DomainError("functional: alpha must lie in [0, pi), got " + std::to_string(alpha));
  }
}

// Minimal energy W = 1 / cap of the South cap [alpha, pi].
double energy_w(int d, double alpha) {
  const double pref = std::exp(0.5 * std::log(kPi) + lg(0.5 * d - 1.0) - (d - 2) * kLn2 -
                               lg(0.5 * (d - 1)));
  return pref / cap_beta(d, CapGeometry(Pole::South, alpha));
}

// B(cos^2(alpha/2); a, b) with the complement passed exactly.
double beta_c2(double alpha, double a, double b) {
  const Colatitude c = Colatitude::from_theta(alpha);
  return inc_beta(0.5 * c.opc, 0.5 * c.omc, a, b);
}

// Accepts h(lo) >= 0 >= h(hi) and halves until the bracket cannot shrink.
SupportSolveResult bisect_decreasing(const std::function<double(double)>& h, double lo, double hi) {
  double h_lo = h(lo);
  double h_hi = h(hi);
  SupportSolveResult r;
  r.method = SupportMethod::CharacteristicRoot;
  if (!(h_lo > 0.0) || !(h_hi < 0.0)) {
    throw NonConvergenceError("characteristic equation: root is not bracketed");
  }
  for (int it = 0; it < 2000; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo) || !(mid < hi)) break;
    const double hm = h(mid);
    if (hm == 0.0) {
      lo = hi = mid;
      h_lo = h_hi = 0.0;
      break;
    }
    if (hm > 0.0) {
      lo = mid;
      h_lo = hm;
    } else {
      hi = mid;
      h_hi = hm;
    }
  }
  r.lo = lo;
  r.hi = hi;
  if (std::fabs(h_lo) <= std::fabs(h_hi)) {
    r.alpha0 = lo;
    r.residual = std::fabs(h_lo);
  } else {
    r.alpha0 = hi;
    r.residual = std::fabs(h_hi);
  }
  return r;
}

double second_difference(const std::function<double(double)>& f, double x, double h) {
  return f(x + h) + f(x - h) - 2.0 * f(x);
}

}  // namespace

const char* method_name(SupportMethod m) {
  switch (m) {
    case SupportMethod::CharacteristicRoot:
      return "characteristic-root";
    case SupportMethod::FMinimization:
      return "f-minimization";
    case SupportMethod::UserForced:
      return "user-forced";
  }
  return "unknown";
}

double f_functional_generic(int d, double alpha, const ExternalFieldSpec& field,
                            const QuadratureConfig& quad) {
  require_dimension(d);
  require_open_alpha(alpha);
  const double w = energy_w(d, alpha);
  if (std::holds_alternative<ZeroField>(field)) return w;
  const CapGeometry cap(Pole::South, alpha);
  const double integral = cap_integral(
      d, cap,
      [&](const CapPoint& p) { return eval_field(field, d, p.eta) * no_field_core_reg(d, cap, p); },
      quad.cap_nodes);
  if (!std::isfinite(integral)) throw NonConvergenceError("functional: field integral diverges");
  return w * (1.0 + integral / kPi);
}

double f_functional_point_charge(int d, double alpha, double q) {
  require_dimension(d);
  require_open_alpha(alpha);
  if (!(q > 0.0)) throw DomainError("point charge requires q > 0");
  const double k = q * std::exp(0.5 * (d - 2) * kLn2 + lg(0.5 * (d - 1)) - 0.5 * std::log(kPi) -
                                lg(0.5 * d - 1.0));
  return energy_w(d, alpha) * (1.0 + k * beta_c2(alpha, 0.5 * (d - 2), 0.5));
}

double f_functional_quadratic(int d, double alpha) {
  require_dimension(d);
  require_open_alpha(alpha);
  const double k = std::exp(d * kLn2 + lg(0.5 * (d + 3)) - 0.5 * std::log(kPi) - lg(0.5 * d + 1.0));
  return energy_w(d, alpha) * (1.0 + k * beta_c2(alpha, 0.5 * d + 1.0, 0.5 * d));
}

double f_functional_closed(int d, double alpha, const ExternalFieldSpec& field) {
  if (std::holds_alternative<ZeroField>(field)) {
    require_dimension(d);
    require_open_alpha(alpha);
    return energy_w(d, alpha);
  }
  if (const auto* pc = std::get_if<PointCharge>(&field)) return f_functional_point_charge(d, alpha, pc->q);
  if (std::holds_alternative<QuadraticField>(field)) return f_functional_quadratic(d, alpha);
  throw UnsupportedFieldError("f_functional_closed: no closed form for custom fields");
}

double point_charge_lhs(int d, double alpha) {
  require_dimension(d);
  if (!(alpha > 0.0) || !(alpha <= kPi)) throw DomainError("point_charge_lhs: alpha in (0, pi]");
  const double a = 0.5 * (d - 2);
  const double s = std::sin(0.5 * alpha);
  return std::pow(s, -(d - 1)) * beta_c2(alpha, a, 0.5 * d) - beta_c2(alpha, a, 0.5);
}

double point_charge_rhs(int d, double q) {
  require_dimension(d);
  if (!(q > 0.0)) throw DomainError("point charge requires q > 0");
  return std::exp(0.5 * std::log(kPi) + lg(0.5 * d - 1.0) - 0.5 * (d - 2) * kLn2 - lg(0.5 * (d - 1))) / q;
}

double quadratic_lhs(int d, double alpha) {
  require_dimension(d);
  if (!(alpha >= 0.0) || !(alpha <= kPi)) throw DomainError("quadratic_lhs: alpha in [0, pi]");
  const double c = std::cos(0.5 * alpha);
  const double c4 = c * c * c * c;
  return c4 * beta_c2(alpha, 0.5 * d - 1.0, 0.5 * d) - beta_c2(alpha, 0.5 * d + 1.0, 0.5 * d);
}

double quadratic_rhs(int d) {
  require_dimension(d);
  return std::exp(0.5 * std::log(kPi) + lg(0.5 * d - 1.0) - d * kLn2 - lg(0.5 * (d - 1))) * d * (d - 2.0) /
         (d * d - 1.0);
}

SupportSolveResult solve_alpha_point_charge(int d, double q) {
  const double rhs = point_charge_rhs(d, q);
  auto h = [&](double a) { return point_charge_lhs(d, a) - rhs; };
  constexpr double lo = 1e-12;
  if (!(h(lo) > 0.0)) {
    SupportSolveResult r;
    r.alpha0 = 0.0;
    r.boundary = true;
    r.residual = std::fabs(h(lo));
    r.note = "charge too weak to open a gap; support is the whole sphere";
    return r;
  }
  SupportSolveResult r = bisect_decreasing(h, lo, kPi);
  r.curvature = second_difference([&](double a) { return f_functional_point_charge(d, a, q); },
                                  r.alpha0, 1e-3);
  return r;
}

SupportSolveResult solve_alpha_quadratic(int d) {
  const double rhs = quadratic_rhs(d);
  auto h = [&](double a) { return quadratic_lhs(d, a) - rhs; };
  if (!(h(0.0) > 0.0)) {
    SupportSolveResult r;
    r.alpha0 = 0.0;
    r.boundary = true;
    r.residual = 0.0;
    r.note = "no interior root; support is the whole sphere";
    return r;
  }
  SupportSolveResult r = bisect_decreasing(h, 0.0, kPi);
  r.curvature = second_difference([&](double a) { return f_functional_quadratic(d, a); }, r.alpha0, 1e-3);
  return r;
}

SupportSolveResult minimize_functional(const std::function<double(double)>& f, const MinimizeOptions& opts) {
  if (opts.grid < 4 || !(opts.clearance > 0.0) || !(opts.tol > 0.0)) {
    throw ConfigError("minimize_functional: invalid options");
  }
  const double a = opts.clearance;
  const double b = kPi - opts.clearance;
  const int n = opts.grid;
  std::vector<double> xs(n + 1);
  std::vector<double> vs(n + 1);
  for (int i = 0; i <= n; ++i) xs[i] = a + (b - a) * i / n;
  parallel_for(xs.size(), resolve_threads(opts.threads), [&](std::size_t i) { vs[i] = f(xs[i]); });

  SupportSolveResult r;
  r.method = SupportMethod::FMinimization;
  const int best = static_cast<int>(std::min_element(vs.begin(), vs.end()) - vs.begin());
  int minima = 0;
  for (int i = 0; i <= n; ++i) {
    const bool left = i == 0 || vs[i] < vs[i - 1];
    const bool right = i == n || vs[i] < vs[i + 1];
    if (left && right) ++minima;
  }
  r.non_unimodal = minima > 1;
  if (r.non_unimodal) r.note = "functional is not unimodal on the scan grid";

  double lo = xs[std::max(best - 1, 0)];
  double hi = xs[std::min(best + 1, n)];
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > opts.tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = f(x2);
    }
  }
  r.lo = lo;
  r.hi = hi;
  r.alpha0 = 0.5 * (lo + hi);
  r.residual = hi - lo;
  if (r.alpha0 - a <= 2.0 * opts.tol) {
    r.boundary = true;
    r.alpha0 = 0.0;
    r.note = "minimum at the lower clearance; support is the whole sphere";
  } else if (b - r.alpha0 <= 2.0 * opts.tol) {
    r.boundary = true;
    r.alpha0 = kPi;
    r.note = "minimum at the upper clearance; support degenerates to the South Pole";
  } else {
    const double h = std::min(1e-3, 0.5 * std::min(r.alpha0 - a, b - r.alpha0));
    r.curvature = second_difference(f, r.alpha0, h);
  }
  return r;
}

SupportSolveResult solve_alpha_generic(int d, const ExternalFieldSpec& field, const QuadratureConfig& quad,
                                       const MinimizeOptions& opts) {
  require_dimension(d);
  MinimizeOptions o = opts;
  if (o.threads == 0) o.threads = quad.threads;
  return minimize_functional([&](double a) { return f_functional_generic(d, a, field, quad); }, o);
}

double robin_from_functional(int d, const ExternalFieldSpec& field, double alpha0,
                             const QuadratureConfig& quad) {
  if (is_builtin(field)) return f_functional_closed(d, alpha0, field);
  return f_functional_generic(d, alpha0, field, quad);
}

std::vector<double> f_functional_sweep(int d, const ExternalFieldSpec& field, const std::vector<double>& alphas,
                                       const QuadratureConfig& quad, bool closed_form_when_available) {
  require_dimension(d);
  std::vector<double> out(alphas.size());
  const bool closed = closed_form_when_available && is_builtin(field);
  parallel_for(alphas.size(), resolve_threads(quad.threads), [&](std::size_t i) {
    out[i] = closed ? f_functional_closed(d, alphas[i], field) : f_functional_generic(d, alphas[i], field, quad);
  });
  return out;
}

}  // namespace capflow
