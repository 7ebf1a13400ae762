#include "capflow/abel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "capflow/errors.hpp"
#include "capflow/specfun.hpp"

namespace capflow {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

double lg(double x) { return ln_gamma(x); }

// Barycentric interpolant on Chebyshev points of the second kind over [a, b].
class Chebyshev {
 public:
  Chebyshev(const std::function<double(double)>& f, double a, double b, int n) : a_(a), b_(b) {
    x_.resize(n + 1);
    y_.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
      const double t = std::cos(kPi * k / n);
      x_[k] = t;
      y_[k] = f(0.5 * (a + b) + 0.5 * (b - a) * t);
    }
  }

  double operator()(double x) const {
    const double t = (2.0 * x - a_ - b_) / (b_ - a_);
    const int n = static_cast<int>(x_.size()) - 1;
    double num = 0.0;
    double den = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double diff = t - x_[k];
      if (diff == 0.0) return y_[k];
      double w = (k % 2 == 0) ? 1.0 : -1.0;
      if (k == 0 || k == n) w *= 0.5;
      num += w * y_[k] / diff;
      den += w / diff;
    }
    return num / den;
  }

 private:
  double a_;
  double b_;
  std::vector<double> x_;
  std::vector<double> y_;
};

void require_builtin(const ExternalFieldSpec& field, const char* what) {
  if (std::holds_alternative<CustomField>(field)) {
    throw UnsupportedFieldError(std::string(what) + ": no closed form for custom fields");
  }
}

// int_0^1 Q(x = v t - 1) t^((d-3)/2) (1 - t)^(-1/2) dt.
double inner_j(const ExternalFieldSpec& field, int d, double v, const QuadratureConfig& quad) {
  const auto rule = gauss_jacobi(quad.abel_nodes, -0.5, 0.5 * (d - 3));
  double sum = 0.0;
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    const double t = 0.5 * (1.0 + rule->nodes[i]);
    const double opx = v * t;
    sum += rule->weights[i] * eval_field(field, d, Colatitude::from_halves(2.0 - opx, opx));
  }
  return std::pow(2.0, -0.5 * (d - 2)) * sum;
}

CapPoint point_on_interval(const Colatitude& alpha, double tau) {
  // tau in [-1, 1] maps affinely onto cos(eta) in [-1, cos(alpha)].
  CapPoint p;
  const double half = 0.5 * alpha.opc;
  p.gap = half * (1.0 - tau);
  p.eta = Colatitude::from_halves(alpha.omc + p.gap, half * (1.0 + tau));
  return p;
}

}  // namespace

const char* provenance_name(AbelProvenance p) {
  return p == AbelProvenance::ClosedForm ? "closed-form" : "numeric";
}

double AbelIntermediate::g(double zeta) const {
  if (!g_fn) return 0.0;
  return g_fn(Colatitude::from_theta(zeta));
}

double AbelIntermediate::F(double eta) const {
  if (!F_reg) return 0.0;
  const CapPoint p = cap_point(cap, eta);
  if (p.gap <= 0.0) throw DomainError("F: eta must lie in the open support");
  return F_reg(p) / std::sqrt(p.gap);
}

double g_closed(const ExternalFieldSpec& field, int d, const Colatitude& z) {
  require_dimension(d);
  require_builtin(field, "g_closed");
  if (std::holds_alternative<ZeroField>(field)) return 0.0;
  if (const auto* pc = std::get_if<PointCharge>(&field)) {
    const double k = pc->q * std::exp(0.5 * std::log(kPi) + std::log(d - 2.0) + lg(0.5 * (d - 1)) -
                                      0.5 * (d - 1) * std::numbers::ln2 - lg(0.5 * d));
    return -k / z.sin_half();
  }
  const double k = std::exp(2.5 * std::numbers::ln2 + 0.5 * std::log(kPi) + lg(0.5 * (d + 3)) -
                            lg(0.5 * d + 1.0));
  const double c2 = 0.5 * z.opc;
  return -k * std::pow(0.5 * z.omc, 0.5 * (d - 2)) * c2 * c2;
}

double g_closed(const ExternalFieldSpec& field, int d, double zeta) {
  return g_closed(field, d, Colatitude::from_theta(zeta));
}

double abel_inner_integral(const ExternalFieldSpec& field, int d, const Colatitude& zeta,
                           const QuadratureConfig& quad) {
  require_dimension(d);
  const double v = zeta.opc;
  return std::pow(2.0, -0.5 * (d - 3)) * std::pow(v, 0.5 * (d - 2)) * inner_j(field, d, v, quad);
}

double abel_inner_integral_closed(const ExternalFieldSpec& field, int d, double zeta) {
  require_dimension(d);
  require_builtin(field, "abel_inner_integral_closed");
  if (std::holds_alternative<ZeroField>(field)) return 0.0;
  const double ch = std::cos(0.5 * zeta);
  if (const auto* pc = std::get_if<PointCharge>(&field)) {
    const double k = pc->q * std::exp(0.5 * std::log(kPi) + lg(0.5 * (d - 1)) -
                                      0.5 * (d - 3) * std::numbers::ln2 - lg(0.5 * d));
    return k * std::pow(ch, d - 2) * hyp2f1_series(0.5 * (d - 2), 0.5 * (d - 1), 0.5 * d, ch * ch);
  }
  const double k = std::exp(2.5 * std::numbers::ln2 + 0.5 * std::log(kPi) + lg(0.5 * (d + 3)) -
                            lg(0.5 * d + 2.0));
  return k * std::pow(ch, d + 2);
}

double g_numeric(const ExternalFieldSpec& field, int d, const Colatitude& zeta,
                 const QuadratureConfig& quad) {
  require_dimension(d);
  if (std::holds_alternative<ZeroField>(field)) return 0.0;
  const double v0 = zeta.opc;
  auto j = [&](double v) { return inner_j(field, d, v, quad); };
  const double j0 = j(v0);
  const double dj = differentiate(j, v0, 0.0, 2.0, quad).value;
  const double bracket = (d - 2) / kSqrt2 * j0 + 2.0 * kSqrt2 * (0.5 * v0) * dj;
  return -std::pow(0.5 * zeta.omc, 0.5 * (d - 2)) * bracket;
}

double g_numeric(const ExternalFieldSpec& field, int d, double alpha, double zeta,
                 const QuadratureConfig& quad) {
  if (!(zeta >= alpha) || !(zeta <= kPi)) throw DomainError("g_numeric: zeta must lie in [alpha, pi]");
  return g_numeric(field, d, Colatitude::from_theta(zeta), quad);
}

double F_closed_reg(const ExternalFieldSpec& field, int d, const Colatitude& a, const CapPoint& p) {
  require_dimension(d);
  require_builtin(field, "F_closed");
  if (std::holds_alternative<ZeroField>(field)) return 0.0;
  const double omc = p.eta.omc;
  if (const auto* pc = std::get_if<PointCharge>(&field)) {
    const double k = pc->q * std::exp(lg(0.5 * (d - 1)) - 0.5 * std::numbers::ln2 -
                                      0.5 * (d + 1) * std::log(kPi));
    return -k * std::pow(omc, -0.5 * (d - 1)) * std::sqrt(a.omc);
  }
  const double k = 2.0 * std::exp(lg(0.5 * (d + 3)) - 0.5 * (d + 1) * std::log(kPi)) / (d * (d - 2.0));
  const double z = std::fmin(p.gap / omc, 1.0);
  const double omz = std::fmin(a.omc / omc, 1.0);
  const double hd = 0.5 * d;
  const double lead = std::pow(omz, hd) * std::sqrt(omc) * a.opc * a.opc;
  const double betas = 2.0 * (d - 1) * inc_beta(z, omz, 0.5, hd) -
                       2.0 * (d + 1) * omc * inc_beta(z, omz, 0.5, hd + 1.0) +
                       0.5 * (d + 3) * omc * omc * inc_beta(z, omz, 0.5, hd + 2.0);
  return -k * (lead + std::sqrt(p.gap) * betas);
}

double F_closed(const ExternalFieldSpec& field, int d, double alpha, double eta) {
  const CapGeometry cap(Pole::South, alpha);
  const CapPoint p = cap_point(cap, eta);
  if (!(eta > alpha) || p.gap <= 0.0) throw DomainError("F_closed: eta must exceed alpha");
  return F_closed_reg(field, d, Colatitude::from_theta(alpha), p) / std::sqrt(p.gap);
}

double F_numeric_reg(const GFunction& g, int d, const Colatitude& a, const CapPoint& p,
                     const QuadratureConfig& quad) {
  require_dimension(d);
  const auto rule = gauss_legendre(quad.abel_nodes);
  // H(delta) = int_0^1 g(zeta(s)) ds at cos(eta) shifted by delta, where
  // cos zeta = u (1 - s^2) + cos(alpha) s^2.
  auto h = [&](double delta) {
    const double opc_u = p.eta.opc + delta;
    const double omc_u = p.eta.omc - delta;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      const double s = 0.5 * (1.0 + rule->nodes[i]);
      const double s2 = s * s;
      const double opc_z = opc_u * (1.0 - s2) + a.opc * s2;
      const double omc_z = omc_u * (1.0 - s2) + a.omc * s2;
      sum += rule->weights[i] * g(Colatitude::from_halves(omc_z, opc_z));
    }
    return 0.5 * sum;
  };
  const double h0 = h(0.0);
  const double dh = differentiate(h, 0.0, -p.eta.opc, p.gap, quad).value;
  const double pref = std::exp(lg(0.5 * (d - 2)) - std::numbers::ln2 - 0.5 * (d + 2) * std::log(kPi)) *
                      std::pow(0.5 * p.eta.omc, -0.5 * (d - 3));
  return pref * (h0 - 2.0 * p.gap * dh);
}

double F_numeric(const GFunction& g, int d, double alpha, double eta, const QuadratureConfig& quad) {
  const CapGeometry cap(Pole::South, alpha);
  if (!(eta > alpha) || !(eta < kPi)) throw DomainError("F_numeric: eta must lie in (alpha, pi)");
  const CapPoint p = cap_point(cap, eta);
  if (p.gap <= 0.0) throw DomainError("F_numeric: eta too close to alpha");
  return F_numeric_reg(g, d, Colatitude::from_theta(alpha), p, quad) / std::sqrt(p.gap);
}

FieldTermReg reflect_field_term(FieldTermReg south_term) {
  if (!south_term) return {};
  return [t = std::move(south_term)](const CapPoint& p) {
    CapPoint q = p;
    q.eta = p.eta.reflected();
    return t(q);
  };
}

namespace {

AbelIntermediate mirror_to_north(AbelIntermediate south) {
  AbelIntermediate out;
  out.cap = south.cap.reflected();
  out.provenance = south.provenance;
  if (south.g_fn) {
    out.g_fn = [g = south.g_fn](const Colatitude& z) { return -g(z.reflected()); };
  }
  out.F_reg = reflect_field_term(south.F_reg);
  return out;
}

}  // namespace

AbelIntermediate abel_closed(const ExternalFieldSpec& field, int d, const CapGeometry& cap) {
  require_dimension(d);
  require_builtin(field, "abel_closed");
  if (cap.pole == Pole::North) {
    throw UnsupportedFieldError(
        "abel_closed: the built-in closed forms describe South caps; mirror the problem instead");
  }
  AbelIntermediate out;
  out.cap = cap;
  out.provenance = AbelProvenance::ClosedForm;
  if (std::holds_alternative<ZeroField>(field)) return out;
  const Colatitude a = Colatitude::from_theta(cap.alpha);
  out.g_fn = [field, d](const Colatitude& z) { return g_closed(field, d, z); };
  out.F_reg = [field, d, a](const CapPoint& p) { return F_closed_reg(field, d, a, p); };
  return out;
}

AbelIntermediate abel_numeric(const ExternalFieldSpec& field, int d, const CapGeometry& cap,
                              const QuadratureConfig& quad) {
  require_dimension(d);
  if (cap.pole == Pole::North) {
    return mirror_to_north(abel_numeric(reflect_field(field, d), d, cap.reflected(), quad));
  }
  AbelIntermediate out;
  out.cap = cap;
  out.provenance = AbelProvenance::Numeric;
  if (std::holds_alternative<ZeroField>(field)) return out;
  if (!(cap.alpha < kPi)) throw DomainError("abel_numeric: cap must have positive measure");
  constexpr int kTableOrder = 48;
  const Colatitude a = Colatitude::from_theta(cap.alpha);
  auto g_table = std::make_shared<const Chebyshev>(
      [&](double zeta) { return g_numeric(field, d, Colatitude::from_theta(zeta), quad); }, cap.alpha,
      kPi, kTableOrder);
  GFunction g = [g_table](const Colatitude& z) { return (*g_table)(z.theta); };
  auto f_table = std::make_shared<const Chebyshev>(
      [&](double tau) { return F_numeric_reg(g, d, a, point_on_interval(a, tau), quad); }, -1.0, 1.0,
      kTableOrder);
  out.g_fn = g;
  out.F_reg = [f_table, a](const CapPoint& p) {
    // Invert cos(eta) = -1 + (1 + cos alpha)(1 + tau) / 2 using the gap.
    const double tau = 1.0 - 2.0 * p.gap / a.opc;
    return (*f_table)(tau);
  };
  return out;
}

}  // namespace capflow
