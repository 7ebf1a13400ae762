#pragma once

#include <string>
#include <vector>

#include "capflow/quadrature.hpp"
#include "capflow/solver.hpp"

namespace capflow {

// Independent checks of a solution. Integrals here use tanh-sinh rules and
// substitutions of their own, never the Gauss-Jacobi nodes of the solver.

struct VerificationThresholds {
  double mass = 1e-8;
  double onsupport = 1e-4;
  double inner_onsupport = 1e-6;
  double offsupport = -1e-4;
};

struct VerifyOptions {
  double collar = 0.02;          // off-support samples keep this distance from the edge
  double pole_exclusion = 0.05;  // and this distance from a pole where Q is infinite
  double inner_fraction = 0.8;   // the inner part of the support, measured from the pole
};

struct VerificationReport {
  double mass_residual = 0.0;
  double sup_onsupport_residual = 0.0;
  double sup_inner_residual = 0.0;
  double min_offsupport_margin = 0.0;
  int onsupport_samples = 0;
  int offsupport_samples = 0;
  std::vector<NamedResidual> oracle_discrepancies;
  std::vector<std::string> sample_failures;

  bool passes(const VerificationThresholds& t = {}) const;
};

/// Potential of the equilibrium measure at colatitude theta, via the zonal
/// kernel reduced to a one-dimensional phi integral.
double potential_eval(const EquilibriumSolution& sol, double theta, const QuadratureConfig& quad = {});

/// omega_(d-1) int f sin^(d-2), integrated in t with t^2 = |cos(eta) - cos(alpha)|.
double mass_oracle(const EquilibriumSolution& sol, const QuadratureConfig& quad = {});

/// Samples U + Q - F_Q on n points inside the support and n points off it.
/// Per-sample failures are recorded, not thrown.
VerificationReport variational_check(const EquilibriumSolution& sol, const QuadratureConfig& quad, int n_samples,
                                     const VerifyOptions& opts = {});

/// |LHS - RHS| / |RHS| for
/// int_0^pi sin^(2q) xi / (a^2 + b^2 - 2ab cos xi)^(q + 1/2) d xi
///   = 2 / (ab)^(2q) int_0^min(a,b) t^(2q) / (sqrt(a^2 - t^2) sqrt(b^2 - t^2)) dt.
double kernel_identity_check(double a, double b, double q, const QuadratureConfig& quad = {});

/// Largest relative gap between funk_hecke_integral on S^(d-2) and direct
/// xi-quadrature of the same zonal kernels (constant, t^2, and the Newtonian
/// kernel between colatitudes 1.0 and 2.0 of S^(d-1)).
double funk_hecke_check(int d, const QuadratureConfig& quad = {});

/// Kernel-identity grid and Funk-Hecke residuals as named entries.
std::vector<NamedResidual> oracle_self_tests(int d, const QuadratureConfig& quad = {});

/// JSON for the report, with a header describing the solution.
std::string report_to_json(const VerificationReport& report, const EquilibriumSolution& sol,
                           const VerificationThresholds& thresholds = {});

}  // namespace capflow
