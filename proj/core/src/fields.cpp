#include "capflow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "capflow/errors.hpp"

namespace capflow {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ExternalFieldSpec make_point_charge(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError("point charge requires q > 0");
  return PointCharge{q};
}

std::string field_name(const ExternalFieldSpec& field) {
  return std::visit(Overloaded{[](const ZeroField&) { return std::string("zero"); },
                               [](const PointCharge&) { return std::string("point-charge"); },
                               [](const QuadraticField&) { return std::string("quadratic"); },
                               [](const CustomField& c) { return c.label; }},
                    field);
}

bool is_builtin(const ExternalFieldSpec& field) { return !std::holds_alternative<CustomField>(field); }

double eval_field(const ExternalFieldSpec& field, int d, const Colatitude& th) {
  return std::visit(Overloaded{[](const ZeroField&) { return 0.0; },
                               [&](const PointCharge& pc) {
                                 if (th.omc == 0.0) return std::numeric_limits<double>::infinity();
                                 return pc.q * std::pow(th.omc, -0.5 * (d - 2));
                               },
                               [&](const QuadraticField&) { return th.opc * th.opc; },
                               [&](const CustomField& c) { return c.eval(th.theta); }},
                    field);
}

double eval_field(const ExternalFieldSpec& field, int d, double theta) {
  if (!(theta >= 0.0) || !(theta <= std::numbers::pi)) {
    throw DomainError("eval_field: theta must lie in [0, pi]");
  }
  return eval_field(field, d, Colatitude::from_theta(theta));
}

ExternalFieldSpec reflect_field(const ExternalFieldSpec& field, int d) {
  if (std::holds_alternative<ZeroField>(field)) return field;
  CustomField out;
  out.label = "reflected-" + field_name(field);
  if (const auto* c = std::get_if<CustomField>(&field)) out.smooth = c->smooth;
  out.eval = [field, d](double theta) {
    return eval_field(field, d, Colatitude::from_theta(theta).reflected());
  };
  return out;
}

ExternalFieldSpec scale_field(const ExternalFieldSpec& field, int d, double c) {
  CustomField out;
  out.label = "scaled-" + field_name(field);
  if (const auto* cf = std::get_if<CustomField>(&field)) out.smooth = cf->smooth;
  out.eval = [field, d, c](double theta) { return c * eval_field(field, d, theta); };
  return out;
}

AdmissibilityReport check_south_cap_admissible(const ExternalFieldSpec& field, int d) {
  require_dimension(d);
  AdmissibilityReport rep;
  if (std::holds_alternative<ZeroField>(field)) return rep;
  constexpr int n = 1000;
  constexpr double eps = 1e-9;
  std::vector<double> x(n);
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / (n - 1);
    x[i] = (-1.0 + eps) + s * (2.0 - 2.0 * eps);
    // Exact 1 -/+ x for the grid point keeps the pole behaviour honest.
    const double omx = (2.0 - eps) - s * (2.0 - 2.0 * eps);
    const double opx = eps + s * (2.0 - 2.0 * eps);
    q[i] = eval_field(field, d, Colatitude::from_halves(omx, opx));
    if (!std::isfinite(q[i])) {
      rep.admissible = false;
      rep.first_bad_index = i;
      rep.diagnostics = "field is not finite at x = " + std::to_string(x[i]);
      return rep;
    }
  }
  auto slack = [&](int i, int j) { return 1e-12 * std::fmax(1.0, std::fmax(std::fabs(q[i]), std::fabs(q[j]))); };
  char buf[256];
  for (int i = 0; i + 1 < n; ++i) {
    if (q[i + 1] < q[i] - slack(i, i + 1)) {
      std::snprintf(buf, sizeof buf, "not nondecreasing: Q(%.9g) = %.9g > Q(%.9g) = %.9g", x[i], q[i],
                    x[i + 1], q[i + 1]);
      return {false, buf, i};
    }
  }
  for (int i = 1; i + 1 < n; ++i) {
    if (q[i - 1] + q[i + 1] < 2.0 * q[i] - 2.0 * slack(i - 1, i + 1)) {
      std::snprintf(buf, sizeof buf, "not midpoint convex between x = %.9g and x = %.9g", x[i - 1],
                    x[i + 1]);
      return {false, buf, i};
    }
  }
  return rep;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) throw ConfigError("spline: need at least 3 matching samples");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(x_[i + 1] > x_[i])) throw ConfigError("spline: abscissae must be strictly increasing");
  }
  // Tridiagonal solve for the natural spline (m_0 = m_{n-1} = 0).
  m_.assign(n, 0.0);
  std::vector<double> c(n, 0.0);
  std::vector<double> r(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double rhs = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
    c[i] = h1 / diag;
    r[i] = (rhs - h0 * r[i - 1]) / diag;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = r[i] - c[i] * m_[i + 1];
  }
}

double CubicSpline::operator()(double x) const {
  const std::size_t n = x_.size();
  std::size_t k = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  k = std::clamp<std::size_t>(k, 1, n - 1);
  const double h = x_[k] - x_[k - 1];
  const double a = (x_[k] - x) / h;
  const double b = (x - x_[k - 1]) / h;
  return a * y_[k - 1] + b * y_[k] + ((a * a * a - a) * m_[k - 1] + (b * b * b - b) * m_[k]) * h * h / 6.0;
}

ExternalFieldSpec field_from_table(std::vector<double> theta, std::vector<double> q,
                                   const std::string& label) {
  if (theta.size() < 3) throw ConfigError("field table needs at least 3 rows");
  if (theta.front() > 1e-6 || theta.back() < std::numbers::pi - 1e-6) {
    throw ConfigError("field table must cover theta in [0, pi]");
  }
  for (double v : q) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("field table values must be finite and nonnegative");
  }
  auto spline = std::make_shared<const CubicSpline>(std::move(theta), std::move(q));
  CustomField out;
  out.label = label;
  out.smooth = true;
  out.eval = [spline](double t) { return (*spline)(t); };
  return out;
}

ExternalFieldSpec load_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field file: " + path);
  std::vector<double> theta;
  std::vector<double> q;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double t = 0.0;
    double v = 0.0;
    if (!(ss >> t >> v)) {
      if (theta.empty()) continue;  // header
      throw ConfigError("field file " + path + ": malformed line " + std::to_string(lineno));
    }
    theta.push_back(t);
    q.push_back(v);
  }
  return field_from_table(std::move(theta), std::move(q), "file:" + path);
}

}  // namespace capflow
