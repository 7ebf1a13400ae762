#pragma once

#include <functional>

#include "capflow/equilibrium.hpp"
#include "capflow/fields.hpp"
#include "capflow/quadrature.hpp"
#include "capflow/sphere.hpp"

namespace capflow {

// Field-to-density transforms. Every function here works in the South-cap
// frame unless it takes a CapGeometry; North caps are handled by the mirror
// theta -> pi - theta, under which g changes sign and F is carried over.

enum class AbelProvenance { ClosedForm, Numeric };

const char* provenance_name(AbelProvenance p);

/// g as a function of the colatitude zeta.
using GFunction = std::function<double(const Colatitude&)>;

struct AbelIntermediate {
  CapGeometry cap;
  GFunction g_fn;
  FieldTermReg F_reg;  // F * sqrt(gap)
  AbelProvenance provenance = AbelProvenance::ClosedForm;

  double g(double zeta) const;
  double F(double eta) const;
};

/// Closed-form g for the point charge and the quadratic field (zero for the
/// zero field). Throws UnsupportedFieldError for custom fields.
double g_closed(const ExternalFieldSpec& field, int d, const Colatitude& zeta);
double g_closed(const ExternalFieldSpec& field, int d, double zeta);

/// int_zeta^pi Q(theta) cos^(d-3)(theta/2) sin(theta) / sqrt(cos zeta - cos theta) d theta,
/// by the substitution 1 + cos theta = (1 + cos zeta) t and Gauss-Jacobi in t.
double abel_inner_integral(const ExternalFieldSpec& field, int d, const Colatitude& zeta,
                           const QuadratureConfig& quad);
/// Closed form of the same integral for the built-in fields.
double abel_inner_integral_closed(const ExternalFieldSpec& field, int d, double zeta);

/// g by differentiating the desingularized inner integral numerically.
double g_numeric(const ExternalFieldSpec& field, int d, const Colatitude& zeta,
                 const QuadratureConfig& quad);
double g_numeric(const ExternalFieldSpec& field, int d, double alpha, double zeta,
                 const QuadratureConfig& quad);

/// Closed-form F for the support [alpha, pi], returned as F * sqrt(gap).
double F_closed_reg(const ExternalFieldSpec& field, int d, const Colatitude& alpha, const CapPoint& p);
double F_closed(const ExternalFieldSpec& field, int d, double alpha, double eta);

/// F from g through the outer Abel transform, substituting
/// cos zeta = cos eta + gap s^2 and differentiating in cos eta. Returned as F * sqrt(gap).
double F_numeric_reg(const GFunction& g, int d, const Colatitude& alpha, const CapPoint& p,
                     const QuadratureConfig& quad);
double F_numeric(const GFunction& g, int d, double alpha, double eta, const QuadratureConfig& quad);

/// Closed-form pipeline for a built-in field on a South or North cap.
AbelIntermediate abel_closed(const ExternalFieldSpec& field, int d, const CapGeometry& cap);

/// Numeric pipeline: g and F * sqrt(gap) are tabulated on Chebyshev grids
/// over the support and interpolated.
AbelIntermediate abel_numeric(const ExternalFieldSpec& field, int d, const CapGeometry& cap,
                              const QuadratureConfig& quad);

/// F term carried from a South cap onto its mirror image.
FieldTermReg reflect_field_term(FieldTermReg south_term);

}  // namespace capflow
