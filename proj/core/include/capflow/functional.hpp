#pragma once

#include <functional>
#include <string>
#include <vector>

#include "capflow/fields.hpp"
#include "capflow/quadrature.hpp"

namespace capflow {

/// Energy functional of the South cap [alpha, pi] by quadrature of Q against
/// the no-field cap density: W * {1 + (1/pi) int Q core sin^(d-2)}.
double f_functional_generic(int d, double alpha, const ExternalFieldSpec& field,
                            const QuadratureConfig& quad);

/// Closed forms for the built-in fields.
double f_functional_point_charge(int d, double alpha, double q);
double f_functional_quadratic(int d, double alpha);
/// Dispatches to the closed forms; UnsupportedFieldError for custom fields.
double f_functional_closed(int d, double alpha, const ExternalFieldSpec& field);

/// Sides of the characteristic equations.
double point_charge_lhs(int d, double alpha);
double point_charge_rhs(int d, double q);
double quadratic_lhs(int d, double alpha);
double quadratic_rhs(int d);

enum class SupportMethod { CharacteristicRoot, FMinimization, UserForced };

const char* method_name(SupportMethod m);

struct SupportSolveResult {
  double alpha0 = 0.0;  // 0 means the support is the whole sphere
  SupportMethod method = SupportMethod::CharacteristicRoot;
  double residual = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool boundary = false;         // optimum on the edge of the search interval
  bool non_unimodal = false;     // more than one local minimum seen
  double curvature = 0.0;        // second difference of the functional at alpha0
  std::string note;
};

/// Bisection on the point-charge characteristic equation.
SupportSolveResult solve_alpha_point_charge(int d, double q);
/// Bisection on the quadratic-field characteristic equation; alpha0 = 0 when
/// no sign change exists.
SupportSolveResult solve_alpha_quadratic(int d);

struct MinimizeOptions {
  double clearance = 1e-4;
  double tol = 1e-8;
  int grid = 64;
  int threads = 0;
};

/// Grid scan followed by golden-section search of f over [clearance, pi - clearance].
SupportSolveResult minimize_functional(const std::function<double(double)>& f,
                                       const MinimizeOptions& opts = {});

/// Support angle by minimizing f_functional_generic.
SupportSolveResult solve_alpha_generic(int d, const ExternalFieldSpec& field,
                                       const QuadratureConfig& quad, const MinimizeOptions& opts = {});

/// F_Q as the value of the functional at alpha0 (closed form for built-ins).
double robin_from_functional(int d, const ExternalFieldSpec& field, double alpha0,
                             const QuadratureConfig& quad = {});

/// Functional over an alpha grid; evaluated in parallel, identical to serial.
std::vector<double> f_functional_sweep(int d, const ExternalFieldSpec& field,
                                       const std::vector<double>& alphas, const QuadratureConfig& quad,
                                       bool closed_form_when_available = true);

}  // namespace capflow
