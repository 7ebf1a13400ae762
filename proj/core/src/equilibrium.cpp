#include "capflow/equilibrium.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "capflow/errors.hpp"
#include "capflow/specfun.hpp"

namespace capflow {
namespace {

constexpr double kPi = std::numbers::pi;

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha <= kPi)) {
    throw DomainError("cap angle must lie in (0, pi], got " + std::to_string(alpha));
  }
}

// Gamma(d/2 - 1) / (2^(d-2) sqrt(pi) Gamma((d-1)/2)).
double c_q_prefactor(int d) {
  return std::exp(ln_gamma(0.5 * d - 1.0) - (d - 2) * std::numbers::ln2 - 0.5 * std::log(kPi) -
                  ln_gamma(0.5 * (d - 1)));
}

}  // namespace

double cap_beta(int d, const CapGeometry& cap) {
  const Colatitude a = Colatitude::from_theta(cap.alpha);
  const double a_par = 0.5 * (d - 2);
  const double b_par = 0.5 * d;
  if (cap.pole == Pole::South) return inc_beta(0.5 * a.opc, 0.5 * a.omc, a_par, b_par);
  return inc_beta(0.5 * a.omc, 0.5 * a.opc, a_par, b_par);
}

double cap_capacity(int d, double alpha) {
  require_dimension(d);
  require_alpha(alpha);
  const double pref = std::exp((d - 2) * std::numbers::ln2 + ln_gamma(0.5 * (d - 1)) -
                               0.5 * std::log(kPi) - ln_gamma(0.5 * d - 1.0));
  return pref * cap_beta(d, CapGeometry(Pole::South, alpha));
}

double no_field_normalizer(int d, double alpha) {
  require_dimension(d);
  if (alpha != 0.0) require_alpha(alpha);
  const double pref = std::exp(ln_gamma(0.5 * d - 1.0) - (d - 1) * std::numbers::ln2 -
                               0.5 * d * std::log(kPi));
  return pref / cap_beta(d, CapGeometry(Pole::South, alpha));
}

CapPoint cap_point(const CapGeometry& cap, double eta) {
  if (!(eta >= 0.0) || !(eta <= kPi)) throw DomainError("cap_point: eta must lie in [0, pi]");
  CapPoint p;
  p.eta = Colatitude::from_theta(eta);
  const double diff = cap.pole == Pole::South ? eta - cap.alpha : cap.alpha - eta;
  p.gap = 2.0 * std::sin(0.5 * (eta + cap.alpha)) * std::sin(0.5 * diff);
  if (p.gap < 0.0) p.gap = 0.0;
  return p;
}

double no_field_core_reg(int d, const CapGeometry& cap, const CapPoint& p) {
  const Colatitude a = Colatitude::from_theta(cap.alpha);
  // Distances to the cap's own pole: 1 - cos for South caps, 1 + cos for North.
  const double pole_a = cap.pole == Pole::South ? a.omc : a.opc;
  const double pole_e = cap.pole == Pole::South ? p.eta.omc : p.eta.opc;
  if (pole_e <= 0.0) {
    // Only reached by the whole sphere, at the pole opposite the cap centre.
    return 0.5 * (d - 1) * beta_fn(0.5, 0.5 * d) * std::sqrt(p.gap);
  }
  const double z = p.gap / pole_e;
  const double omz = pole_a / pole_e;
  const double beta = inc_beta(std::fmin(z, 1.0), std::fmin(omz, 1.0), 0.5, 0.5 * d);
  return 0.5 * (d - 1) * beta * std::sqrt(p.gap) + std::pow(omz, 0.5 * (d - 1)) * std::sqrt(pole_a);
}

double cap_density_no_field(int d, double alpha, double eta) {
  require_dimension(d);
  require_alpha(alpha);
  if (!(eta > alpha) || !(eta <= kPi)) {
    throw DomainError("cap_density_no_field: eta must lie in (alpha, pi]");
  }
  const CapGeometry cap(Pole::South, alpha);
  const CapPoint p = cap_point(cap, eta);
  if (p.gap <= 0.0) throw DomainError("cap_density_no_field: eta too close to the cap edge");
  return no_field_normalizer(d, alpha) * no_field_core_reg(d, cap, p) / std::sqrt(p.gap);
}

DensityEvaluator::DensityEvaluator(int d, CapGeometry cap, double c_q, FieldTermReg field_term)
    : d_(d), cap_(cap), c_q_(c_q), field_term_(std::move(field_term)) {
  require_dimension(d);
  if (!std::isfinite(c_q)) throw DomainError("density: C_Q must be finite");
}

double DensityEvaluator::regularized(const CapPoint& p) const {
  double v = c_q_ * no_field_core_reg(d_, cap_, p);
  if (field_term_) v += field_term_(p);
  return v;
}

double DensityEvaluator::operator()(double eta) const {
  const bool inside = cap_.pole == Pole::South ? eta > cap_.alpha : eta < cap_.alpha;
  if (!inside || !(eta >= 0.0) || !(eta <= kPi)) {
    throw DomainError("density: eta must lie in the open support");
  }
  const CapPoint p = cap_point(cap_, eta);
  if (p.gap <= 0.0) throw DomainError("density: eta too close to the cap edge");
  return regularized(p) / std::sqrt(p.gap);
}

DensityEvaluator assemble_density(int d, const CapGeometry& cap, double c_q, FieldTermReg field_term) {
  return DensityEvaluator(d, cap, c_q, std::move(field_term));
}

RobinConstants c_q_from_F(int d, const CapGeometry& cap, const FieldTermReg& field_term,
                          const QuadratureConfig& quad) {
  require_dimension(d);
  RobinConstants out;
  out.field_mass = field_term ? cap_integral(d, cap, field_term, quad.cap_nodes) : 0.0;
  const double inv_omega = 1.0 / surface_area(d - 1);
  out.c_q = c_q_prefactor(d) / cap_beta(d, cap) * (inv_omega - out.field_mass);
  out.f_q = robin_from_c_q(d, out.c_q);
  if (!std::isfinite(out.c_q)) throw NonConvergenceError("c_q_from_F: non-finite result");
  return out;
}

double robin_from_c_q(int d, double c_q) {
  return c_q * 2.0 * std::exp(0.5 * (d + 1) * std::log(kPi) - ln_gamma(0.5 * (d - 1)));
}

}  // namespace capflow
