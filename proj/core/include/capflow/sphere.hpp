#pragma once

#include <functional>

#include "capflow/quadrature.hpp"

namespace capflow {

/// Ambient dimension of R^d hosting the sphere S^(d-1); at least 3.
struct Dimension {
  int d;
  explicit Dimension(int value);
  operator int() const { return d; }
};

/// Throws DomainError unless d >= 3.
void require_dimension(int d);

enum class Pole { North, South };

const char* pole_name(Pole pole);

/// North cap is {theta <= alpha}, South cap is {theta >= alpha}. A South cap
/// with alpha = 0 is the whole sphere.
struct CapGeometry {
  Pole pole = Pole::South;
  double alpha = 0.0;

  CapGeometry() = default;
  CapGeometry(Pole p, double a);

  bool contains(double theta) const;
  /// Cap of the same set seen after theta -> pi - theta.
  CapGeometry reflected() const;
};

/// A colatitude together with 1 - cos and 1 + cos computed without cancellation.
struct Colatitude {
  double theta = 0.0;
  double cos = 1.0;
  double omc = 0.0;  // 1 - cos(theta) = 2 sin^2(theta/2)
  double opc = 2.0;  // 1 + cos(theta) = 2 cos^2(theta/2)

  static Colatitude from_theta(double theta);
  /// Builds from exact 1 - cos and 1 + cos; theta is recovered with atan2.
  static Colatitude from_halves(double omc, double opc);

  double sin() const;
  double sin_half() const;
  double cos_half() const;
  Colatitude reflected() const;
};

/// A support point plus its cosine distance to the cap boundary,
/// gap = |cos(eta) - cos(alpha)|, which carries the edge singularity.
struct CapPoint {
  Colatitude eta;
  double gap = 0.0;
};

/// Support point for the South cap [alpha, pi] given both angles directly.
CapPoint south_cap_point(const Colatitude& alpha, const Colatitude& eta);

/// Surface area of S^(d-1), 2 pi^(d/2) / Gamma(d/2); accepts d >= 1.
double surface_area(int d);

/// omega_(d-1) * int_{-1}^{1} kernel(t) (1 - t^2)^((d-3)/2) dt: the integral
/// of a zonal kernel over S^(d-1). Accepts d >= 2.
double funk_hecke_integral(const std::function<double(double)>& kernel, int d,
                           const QuadratureConfig& quad);

/// int over the cap of h(eta) sin^(d-2)(eta) d eta, where the caller passes
/// h_reg(p) = h * sqrt(p.gap), which must be smooth up to the edge. The edge
/// singularity and the pole factor are folded into a Gauss-Jacobi weight, so
/// the node set depends smoothly on alpha.
double cap_integral(int d, const CapGeometry& cap, const std::function<double(const CapPoint&)>& h_reg,
                    int nodes);

}  // namespace capflow
