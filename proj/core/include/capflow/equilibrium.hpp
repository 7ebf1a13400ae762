#pragma once

#include <functional>

#include "capflow/quadrature.hpp"
#include "capflow/sphere.hpp"

namespace capflow {

/// Newtonian capacity of the South cap [alpha, pi] on S^(d-1).
double cap_capacity(int d, double alpha);

/// Normalizing constant of the no-field density of the South cap [alpha, pi].
double no_field_normalizer(int d, double alpha);

/// Incomplete Beta of the cap measured by the cap's own pole:
/// B(cos^2(alpha/2); (d-2)/2, d/2) for South caps, B(sin^2(alpha/2); ...) for North.
double cap_beta(int d, const CapGeometry& cap);

/// Support point of the cap at eta, with gap = |cos(eta) - cos(alpha)|.
CapPoint cap_point(const CapGeometry& cap, double eta);

/// The hypergeometric factor of the no-field density (without its constant)
/// multiplied by sqrt(gap), so it stays finite at the edge. South caps use
/// 1 - cos, North caps 1 + cos.
double no_field_core_reg(int d, const CapGeometry& cap, const CapPoint& p);

/// Equilibrium density of the South cap [alpha, pi] with no field, alpha < eta <= pi.
double cap_density_no_field(int d, double alpha, double eta);

/// Field contribution to the density, returned as F(eta) * sqrt(gap).
using FieldTermReg = std::function<double(const CapPoint&)>;

/// Evaluates f(eta) = C_Q * core(eta) + F(eta) on the support.
class DensityEvaluator {
 public:
  DensityEvaluator() = default;
  DensityEvaluator(int d, CapGeometry cap, double c_q, FieldTermReg field_term);

  /// Density at eta on the support; throws DomainError at or beyond the edge.
  double operator()(double eta) const;
  /// f * sqrt(gap), finite up to the edge.
  double regularized(const CapPoint& p) const;

  int dimension() const { return d_; }
  const CapGeometry& cap() const { return cap_; }
  double c_q() const { return c_q_; }
  bool has_field_term() const { return static_cast<bool>(field_term_); }
  const FieldTermReg& field_term() const { return field_term_; }

 private:
  int d_ = 3;
  CapGeometry cap_;
  double c_q_ = 0.0;
  FieldTermReg field_term_;
};

DensityEvaluator assemble_density(int d, const CapGeometry& cap, double c_q, FieldTermReg field_term);

struct RobinConstants {
  double c_q = 0.0;
  double f_q = 0.0;
  double field_mass = 0.0;  // int F sin^(d-2)
};

/// C_Q from the normalization of the total mass, and F_Q by proportionality.
RobinConstants c_q_from_F(int d, const CapGeometry& cap, const FieldTermReg& field_term,
                          const QuadratureConfig& quad);

/// F_Q = C_Q * 2 pi^((d+1)/2) / Gamma((d-1)/2).
double robin_from_c_q(int d, double c_q);

}  // namespace capflow
