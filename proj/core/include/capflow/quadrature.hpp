#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace capflow {

/// Tolerances, node counts and step policy shared by every numeric integral.
struct QuadratureConfig {
  int cap_nodes = 96;          // Gauss-Jacobi nodes for integrals over the support
  int abel_nodes = 64;         // nodes for the desingularized Abel transforms
  int funk_hecke_nodes = 48;   // starting node count, doubled until converged
  int funk_hecke_max_nodes = 1536;
  double funk_hecke_tol = 1e-13;
  double oracle_tol = 1e-13;   // tanh-sinh relative tolerance
  int oracle_max_refinements = 12;
  double diff_h_min = 1e-6;
  double diff_h_max = 1e-3;
  double edge_window = 0.02;   // interior window for the numeric Abel transforms
  int threads = 0;             // 0 picks CAPFLOW_THREADS or the hardware count

  void validate() const;
};

/// Nodes and weights on [-1, 1] for the weight (1 - x)^alpha (1 + x)^beta.
struct GaussRule {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule, cached process-wide; the returned rule is immutable.
std::shared_ptr<const GaussRule> gauss_jacobi(int n, double alpha, double beta);

inline std::shared_ptr<const GaussRule> gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Jacobi polynomial P_n^(alpha,beta)(x) and its derivative.
struct JacobiValue {
  double p;
  double dp;
};
JacobiValue jacobi_polynomial(int n, double alpha, double beta, double x);

/// Integrand for the double-exponential rule: f(x, xc) where xc is the signed
/// distance to the nearer endpoint (a - x on the left half, b - x on the right).
using ComplementIntegrand = std::function<double(double, double)>;

struct OracleResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
};

/// Tanh-sinh integration on [a, b]. Throws NonConvergenceError when the error
/// estimate is far worse than requested.
OracleResult integrate_tanh_sinh(const ComplementIntegrand& f, double a, double b,
                                 const QuadratureConfig& quad);

struct DerivativeEstimate {
  double value = 0.0;
  double error = 0.0;
  double step = 0.0;
};

/// First derivative of f at x for f defined on (lo, hi). Central differences
/// with one Richardson step; the step is chosen in [diff_h_min, diff_h_max] by
/// comparing successive estimates, and switches to one-sided stencils when x
/// sits closer than diff_h_min to a domain end.
DerivativeEstimate differentiate(const std::function<double(double)>& f, double x, double lo,
                                 double hi, const QuadratureConfig& quad);

}  // namespace capflow
