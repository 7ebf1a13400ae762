#pragma once

// Real special functions used by the cap density and energy formulas.
// All functions are pure and thread-safe.

namespace capflow {

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Gamma(x) for x > 0, computed as exp(ln_gamma(x)).
double gamma_fn(double x);

/// Complete Beta function B(a, b).
double beta_fn(double a, double b);

/// Non-regularized incomplete Beta B(z; a, b) = int_0^z t^(a-1) (1-t)^(b-1) dt.
double inc_beta(double z, double a, double b);

/// Same as inc_beta(z, a, b) but takes 1 - z separately, so callers that know
/// the complement exactly do not lose it to cancellation near z = 1.
double inc_beta(double z, double one_minus_z, double a, double b);

struct SeriesOptions {
  double rel_tol = 1e-15;
  long max_terms = 1000000;
};

/// Gauss hypergeometric 2F1(a, b; c; z) by direct summation, |z| < 1.
/// Throws NonConvergenceError when the tail bound is not met within max_terms.
double hyp2f1_series(double a, double b, double c, double z, const SeriesOptions& opts = {});

/// 2F1(1, (d-1)/2; 1/2; z) through its incomplete-Beta closed form, 0 <= z < 1.
double hyp2f1_core(double z, int d);

}  // namespace capflow
