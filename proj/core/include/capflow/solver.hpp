#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capflow/abel.hpp"
#include "capflow/equilibrium.hpp"
#include "capflow/fields.hpp"
#include "capflow/functional.hpp"
#include "capflow/quadrature.hpp"

namespace capflow {

/// Full input of a solve. With pole = South the field is used as given and the
/// support is a South cap. With pole = North the problem is mirrored through
/// the equatorial plane: the actual field is Q(pi - theta) and the support is
/// a North cap. An explicit alpha (in the frame of `pole`) skips the support
/// search.
struct ProblemSpec {
  int d = 3;
  ExternalFieldSpec field = ZeroField{};
  Pole pole = Pole::South;
  std::optional<double> alpha;
};

/// A named cross-check between two independent computations.
struct NamedResidual {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct EquilibriumSolution {
  int d = 3;
  CapGeometry cap;                 // support in the actual frame
  ExternalFieldSpec field;         // actual field, Q(theta)
  ExternalFieldSpec south_field;   // the field in the South-cap frame
  double alpha0 = 0.0;             // equals cap.alpha
  double c_q = 0.0;
  double f_q = 0.0;
  SupportSolveResult support;     // angles in the South-cap frame
  AbelProvenance provenance = AbelProvenance::ClosedForm;
  DensityEvaluator density;        // density in the actual frame
  DensityEvaluator south_density;  // the same measure in the South-cap frame
  AdmissibilityReport admissibility;
  std::vector<NamedResidual> discrepancies;
};

/// Closed-form C_Q valid at the critical angle of a built-in field.
double c_q_closed(int d, double alpha0, const ExternalFieldSpec& field);

/// Finds the support, constants and density. Custom fields that fail the
/// admissibility check require an explicit alpha (ConfigError otherwise).
EquilibriumSolution solve(const ProblemSpec& spec, const QuadratureConfig& quad = {});

/// A deliberately wrong claim for negative controls: the support angle of
/// `sol` moved by `delta` (in the South-cap frame), with the density rebuilt
/// and normalized on the moved cap, while F_Q keeps its solved value.
EquilibriumSolution perturbed_claim(const EquilibriumSolution& sol, double delta,
                                    const QuadratureConfig& quad = {});

}  // namespace capflow
