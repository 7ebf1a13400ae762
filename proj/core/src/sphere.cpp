#include "capflow/sphere.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "capflow/errors.hpp"
#include "capflow/specfun.hpp"

namespace capflow {

Dimension::Dimension(int value) : d(value) { require_dimension(value); }

void require_dimension(int d) {
  if (d < 3) throw DomainError("dimension must be at least 3, got " + std::to_string(d));
}

const char* pole_name(Pole pole) { return pole == Pole::North ? "north" : "south"; }

CapGeometry::CapGeometry(Pole p, double a) : pole(p), alpha(a) {
  if (!(a >= 0.0) || !(a <= std::numbers::pi)) {
    throw DomainError("cap angle must lie in [0, pi], got " + std::to_string(a));
  }
}

bool CapGeometry::contains(double theta) const {
  return pole == Pole::South ? theta >= alpha : theta <= alpha;
}

CapGeometry CapGeometry::reflected() const {
  CapGeometry out;
  out.pole = pole == Pole::South ? Pole::North : Pole::South;
  out.alpha = std::numbers::pi - alpha;
  return out;
}

Colatitude Colatitude::from_theta(double theta) {
  Colatitude c;
  c.theta = theta;
  c.cos = std::cos(theta);
  const double s = std::sin(0.5 * theta);
  const double h = std::cos(0.5 * theta);
  c.omc = 2.0 * s * s;
  c.opc = 2.0 * h * h;
  return c;
}

Colatitude Colatitude::from_halves(double omc, double opc) {
  Colatitude c;
  c.omc = omc;
  c.opc = opc;
  c.cos = 0.5 * (opc - omc);
  c.theta = 2.0 * std::atan2(std::sqrt(omc), std::sqrt(opc));
  return c;
}

double Colatitude::sin() const { return std::sqrt(omc * opc); }
double Colatitude::sin_half() const { return std::sqrt(0.5 * omc); }
double Colatitude::cos_half() const { return std::sqrt(0.5 * opc); }

Colatitude Colatitude::reflected() const {
  Colatitude c;
  c.theta = std::numbers::pi - theta;
  c.cos = -cos;
  c.omc = opc;
  c.opc = omc;
  return c;
}

CapPoint south_cap_point(const Colatitude& alpha, const Colatitude& eta) {
  CapPoint p;
  p.eta = eta;
  p.gap = 2.0 * std::sin(0.5 * (eta.theta + alpha.theta)) * std::sin(0.5 * (eta.theta - alpha.theta));
  if (p.gap < 0.0) p.gap = 0.0;
  return p;
}

double surface_area(int d) {
  if (d < 1) throw DomainError("surface_area: dimension must be positive");
  return 2.0 * std::exp(0.5 * d * std::log(std::numbers::pi) - ln_gamma(0.5 * d));
}

double funk_hecke_integral(const std::function<double(double)>& kernel, int d,
                           const QuadratureConfig& quad) {
  if (d < 2) throw DomainError("funk_hecke_integral: dimension must be at least 2");
  const double expo = 0.5 * (d - 3);
  const double omega = surface_area(d - 1);
  auto apply = [&](int n, double& l1) {
    const auto rule = gauss_jacobi(n, expo, expo);
    double sum = 0.0;
    l1 = 0.0;
    for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
      const double v = rule->weights[i] * kernel(rule->nodes[i]);
      sum += v;
      l1 += std::fabs(v);
    }
    return sum;
  };
  int n = quad.funk_hecke_nodes;
  double l1 = 0.0;
  double prev = apply(n, l1);
  while (2 * n <= quad.funk_hecke_max_nodes) {
    n *= 2;
    const double cur = apply(n, l1);
    if (std::fabs(cur - prev) <= quad.funk_hecke_tol * l1) return omega * cur;
    prev = cur;
  }
  throw NonConvergenceError("funk_hecke_integral: node doubling did not converge");
}

double cap_integral(int d, const CapGeometry& cap, const std::function<double(const CapPoint&)>& h_reg,
                    int nodes) {
  require_dimension(d);
  // Work in the South frame; a North cap is the mirror image.
  const double alpha_s = cap.pole == Pole::South ? cap.alpha : std::numbers::pi - cap.alpha;
  const Colatitude a = Colatitude::from_theta(alpha_s);
  const double expo = 0.5 * (d - 3);
  const auto rule = gauss_jacobi(nodes, -0.5, expo);
  const double half = 0.5 * a.opc;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    const double s = rule->nodes[i];
    CapPoint p;
    p.gap = half * (1.0 - s);
    p.eta = Colatitude::from_halves(a.omc + p.gap, half * (1.0 + s));
    if (cap.pole == Pole::North) p.eta = p.eta.reflected();
    const double omx = cap.pole == Pole::South ? p.eta.omc : p.eta.opc;
    sum += rule->weights[i] * h_reg(p) * (expo == 0.0 ? 1.0 : std::pow(omx, expo));
  }
  return std::pow(half, 0.5 * (d - 2)) * sum;
}

}  // namespace capflow
