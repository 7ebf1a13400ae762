#include "capflow/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>

#include "capflow/errors.hpp"
#include "capflow/specfun.hpp"

namespace capflow {

void QuadratureConfig::validate() const {
  if (cap_nodes < 4 || abel_nodes < 4 || funk_hecke_nodes < 4) {
    throw ConfigError("quadrature: node counts must be at least 4");
  }
  if (funk_hecke_max_nodes < funk_hecke_nodes) {
    throw ConfigError("quadrature: funk_hecke_max_nodes below funk_hecke_nodes");
  }
  if (!(oracle_tol > 0.0) || !(funk_hecke_tol > 0.0)) {
    throw ConfigError("quadrature: tolerances must be positive");
  }
  if (oracle_max_refinements < 4 || oracle_max_refinements > 20) {
    throw ConfigError("quadrature: oracle_max_refinements must lie in [4, 20]");
  }
  if (!(diff_h_min > 0.0) || !(diff_h_max >= diff_h_min)) {
    throw ConfigError("quadrature: need 0 < diff_h_min <= diff_h_max");
  }
  if (!(edge_window >= 0.0) || edge_window > 0.5) {
    throw ConfigError("quadrature: edge_window must lie in [0, 0.5]");
  }
  if (threads < 0) throw ConfigError("quadrature: threads must be nonnegative");
}

JacobiValue jacobi_polynomial(int n, double alpha, double beta, double x) {
  auto eval = [x](int m, double a, double b) {
    if (m == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
    for (int k = 2; k <= m; ++k) {
      const double s = 2.0 * k + a + b;
      const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
      const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
      const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
      const double p2 = (c2 * p1 - c3 * p0) / c1;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  };
  JacobiValue out{eval(n, alpha, beta), 0.0};
  if (n > 0) out.dp = 0.5 * (n + alpha + beta + 1.0) * eval(n - 1, alpha + 1.0, beta + 1.0);
  return out;
}

namespace {

std::shared_ptr<const GaussRule> build_gauss_jacobi(int n, double alpha, double beta) {
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (beta - alpha) / (ab + 2.0) : (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double b2 = 0.0;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NonConvergenceError("gauss_jacobi: eigenvalue iteration failed");
  }

  auto rule = std::make_shared<GaussRule>();
  rule->alpha = alpha;
  rule->beta = beta;
  rule->nodes.resize(n);
  rule->weights.resize(n);
  // The common factor of the weights is fixed by the zeroth moment, which is
  // far better conditioned than the ratio of large Gamma values.
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0) -
                              ln_gamma(ab + 2.0));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const JacobiValue jv = jacobi_polynomial(n, alpha, beta, x);
      const double step = jv.p / jv.dp;
      const double xn = x - step;
      x = std::fmin(std::fmax(xn, -1.0 + 1e-300), 1.0 - 1e-300);
      if (std::fabs(step) <= 1e-17) break;
    }
    const JacobiValue jv = jacobi_polynomial(n, alpha, beta, x);
    rule->nodes[i] = x;
    rule->weights[i] = 1.0 / ((1.0 - x) * (1.0 + x) * jv.dp * jv.dp);
    total += rule->weights[i];
  }
  for (double& w : rule->weights) w *= mu0 / total;
  return rule;
}

}  // namespace

std::shared_ptr<const GaussRule> gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::shared_ptr<const GaussRule>> cache;
  const auto key = std::make_tuple(n, alpha, beta);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto rule = build_gauss_jacobi(n, alpha, beta);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

OracleResult integrate_tanh_sinh(const ComplementIntegrand& f, double a, double b,
                                 const QuadratureConfig& quad) {
  if (!(b > a)) {
    if (a == b) return {};
    throw DomainError("integrate_tanh_sinh: inverted interval");
  }
  // The rule extends its abscissa tables lazily, so nested integrals get their
  // own instance per nesting depth.
  thread_local std::map<std::pair<int, int>, std::unique_ptr<boost::math::quadrature::tanh_sinh<double>>> rules;
  thread_local int depth = 0;
  auto& rule = rules[{depth, quad.oracle_max_refinements}];
  if (!rule) {
    rule = std::make_unique<boost::math::quadrature::tanh_sinh<double>>(
        static_cast<std::size_t>(quad.oracle_max_refinements));
  }
  struct DepthGuard {
    int& d;
    explicit DepthGuard(int& v) : d(v) { ++d; }
    ~DepthGuard() { --d; }
  } guard(depth);
  OracleResult out;
  try {
    out.value = rule->integrate(f, a, b, quad.oracle_tol, &out.error, &out.l1, &out.levels);
  } catch (const NonConvergenceError&) {
    throw;
  } catch (const std::exception& e) {
    throw NonConvergenceError(std::string("tanh-sinh integration failed: ") + e.what());
  }
  const double scale = std::fmax(out.l1, std::fabs(out.value));
  if (!std::isfinite(out.value) || out.error > std::fmax(1e-7, 1e5 * quad.oracle_tol) * scale) {
    throw NonConvergenceError("tanh-sinh integration: error estimate " + std::to_string(out.error) +
                              " exceeds tolerance");
  }
  return out;
}

DerivativeEstimate differentiate(const std::function<double(double)>& f, double x, double lo,
                                 double hi, const QuadratureConfig& quad) {
  if (!(x > lo) || !(x < hi)) {
    if (!(x >= lo && x <= hi)) throw DomainError("differentiate: point outside domain");
  }
  auto central = [&](double h) {
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double h2 = 0.5 * h;
    const double d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
    return (4.0 * d2 - d1) / 3.0;
  };
  auto one_sided = [&](double h) {
    const double f0 = f(x);
    auto stencil = [&](double s) {
      return (-3.0 * f0 + 4.0 * f(x + s) - f(x + 2.0 * s)) / (2.0 * s);
    };
    return (4.0 * stencil(0.5 * h) - stencil(h)) / 3.0;
  };

  DerivativeEstimate best;
  best.error = INFINITY;
  bool have_prev = false;
  double prev = 0.0;
  double prev_diff = INFINITY;
  for (double h = quad.diff_h_max; h >= quad.diff_h_min * 0.999; h *= 0.25) {
    double est = 0.0;
    if (x - h > lo && x + h < hi) {
      est = central(h);
    } else if (x + 2.0 * h < hi) {
      est = one_sided(h);
    } else if (x - 2.0 * h > lo) {
      est = one_sided(-h);
    } else {
      continue;
    }
    if (!std::isfinite(est)) continue;
    if (have_prev) {
      const double diff = std::fabs(est - prev);
      if (diff < best.error) {
        best = {est, diff, h};
      }
      if (diff > prev_diff && std::isfinite(prev_diff)) break;
      prev_diff = diff;
    } else if (!std::isfinite(best.error)) {
      best = {est, INFINITY, h};
    }
    prev = est;
    have_prev = true;
  }
  if (!std::isfinite(best.value)) {
    throw NonConvergenceError("differentiate: no admissible finite-difference step");
  }
  return best;
}

}  // namespace capflow
