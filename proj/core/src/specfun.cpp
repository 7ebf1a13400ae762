#include "capflow/specfun.hpp"

#include <math.h>

#include <cmath>
#include <limits>
#include <string>

#include "capflow/errors.hpp"

namespace capflow {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxCfIter = 20000;

// Modified Lentz evaluation of the incomplete Beta continued fraction.
double beta_cf(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxCfIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw NonConvergenceError("inc_beta: continued fraction did not converge");
}

// B(z; a, b) evaluated directly by the continued fraction; accurate for z <= a/(a+b).
double inc_beta_lower(double z, double omz, double a, double b) {
  if (z == 0.0) return 0.0;
  const double front = std::exp(a * std::log(z) + b * std::log(omz)) / a;
  return front * beta_cf(z, a, b);
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("ln_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double gamma_fn(double x) { return std::exp(ln_gamma(x)); }

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_fn: parameters must be positive");
  return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

double inc_beta(double z, double one_minus_z, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("inc_beta: parameters must be positive");
  if (!(z >= 0.0) || !(one_minus_z >= 0.0) || z > 1.0 || one_minus_z > 1.0) {
    throw DomainError("inc_beta: z must lie in [0, 1], got " + std::to_string(z));
  }
  if (z == 0.0) return 0.0;
  if (one_minus_z == 0.0) return beta_fn(a, b);
  if (z <= a / (a + b)) return inc_beta_lower(z, one_minus_z, a, b);
  return beta_fn(a, b) - inc_beta_lower(one_minus_z, z, b, a);
}

double inc_beta(double z, double a, double b) { return inc_beta(z, 1.0 - z, a, b); }

double hyp2f1_series(double a, double b, double c, double z, const SeriesOptions& opts) {
  if (!(std::fabs(z) < 1.0)) throw DomainError("hyp2f1_series: requires |z| < 1");
  if (c <= 0.0 && c == std::floor(c)) {
    throw DomainError("hyp2f1_series: c must not be a nonpositive integer");
  }
  double sum = 1.0;
  double term = 1.0;
  const double monotone_from = 2.0 + 2.0 * (std::fabs(a) + std::fabs(b) + std::fabs(c));
  for (long n = 0; n < opts.max_terms; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    sum += term;
    if (term == 0.0) return sum;
    if (dn + 1.0 < monotone_from) continue;
    const double next_ratio =
        std::fabs((a + dn + 1.0) * (b + dn + 1.0) / ((c + dn + 1.0) * (dn + 2.0)) * z);
    const double rho = std::fmax(next_ratio, std::fabs(z));
    if (rho >= 1.0) continue;
    const double tail = std::fabs(term) * next_ratio / (1.0 - rho);
    if (tail <= opts.rel_tol * std::fabs(sum)) return sum;
  }
  throw NonConvergenceError("hyp2f1_series: tail bound not met within " +
                            std::to_string(opts.max_terms) + " terms");
}

double hyp2f1_core(double z, int d) {
  if (d < 3) throw DomainError("hyp2f1_core: dimension must be at least 3");
  if (!(z >= 0.0) || !(z < 1.0)) throw DomainError("hyp2f1_core: requires 0 <= z < 1");
  if (z == 0.0) return 1.0;
  const double half_d = 0.5 * d;
  const double beta = inc_beta(z, 1.0 - z, 0.5, half_d);
  const double scale = std::exp(0.5 * std::log(z) - half_d * std::log1p(-z));
  return 1.0 + 0.5 * (d - 1) * scale * beta;
}

}  // namespace capflow
