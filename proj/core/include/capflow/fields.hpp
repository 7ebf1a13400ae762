#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "capflow/sphere.hpp"

namespace capflow {

struct ZeroField {};

/// Q(theta) = q (1 - cos theta)^(-(d-2)/2): a charge q at the North Pole.
struct PointCharge {
  double q = 1.0;
};

/// Q(theta) = (1 + cos theta)^2.
struct QuadraticField {};

/// User-supplied field Q(theta). The callable must be re-entrant.
struct CustomField {
  std::function<double(double)> eval;
  bool smooth = true;  // caller asserts C^2 near the support
  std::string label = "custom";
};

using ExternalFieldSpec = std::variant<ZeroField, PointCharge, QuadraticField, CustomField>;

/// Builds a point charge, rejecting q <= 0.
ExternalFieldSpec make_point_charge(double q);

std::string field_name(const ExternalFieldSpec& field);
bool is_builtin(const ExternalFieldSpec& field);

/// Q at colatitude theta in [0, pi]; +infinity at theta = 0 for a point charge.
double eval_field(const ExternalFieldSpec& field, int d, double theta);
/// Same, using 1 -/+ cos(theta) directly for the built-in fields.
double eval_field(const ExternalFieldSpec& field, int d, const Colatitude& theta);

/// The field theta -> Q(pi - theta).
ExternalFieldSpec reflect_field(const ExternalFieldSpec& field, int d);
/// The field c * Q.
ExternalFieldSpec scale_field(const ExternalFieldSpec& field, int d, double c);

struct AdmissibilityReport {
  bool admissible = true;
  std::string diagnostics;
  int first_bad_index = -1;
};

/// Samples Q(x) on 1000 points of [-1 + 1e-9, 1 - 1e-9] in x = cos(theta) and
/// checks that it is nondecreasing and midpoint convex.
AdmissibilityReport check_south_cap_admissible(const ExternalFieldSpec& field, int d);

/// Natural cubic spline through (x_i, y_i), x strictly increasing.
class CubicSpline {
 public:
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double lower() const { return x_.front(); }
  double upper() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots
};

/// Reads a two-column CSV (theta, Q) and returns a spline-backed custom
/// field. Lines starting with '#' and a non-numeric header are skipped.
ExternalFieldSpec load_field_csv(const std::string& path);
ExternalFieldSpec field_from_table(std::vector<double> theta, std::vector<double> q,
                                   const std::string& label);

}  // namespace capflow
