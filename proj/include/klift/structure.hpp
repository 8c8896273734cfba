#pragma once

#include "klift/bundle_calculus.hpp"
#include "klift/lift_algebra.hpp"
#include "klift/scalar_curve.hpp"
#include "klift/space_form.hpp"

#include <optional>
#include <string>

namespace klift {

// Deliberate departures from a configured structure, used to falsify the iff statements.
struct Perturbation {
  double b1_delta = 0.0;  // added to b1; b2 is recomputed so J stays almost complex
  double b3_delta = 0.0;  // added to b3; likewise
  double c1_scale = 1.0;  // multiplies c1 only, breaking proportionality
  double mu_delta = 0.0;  // added to mu

  bool is_identity() const { return b1_delta == 0.0 && b3_delta == 0.0 && c1_scale == 1.0 && mu_delta == 0.0; }
};

// The free data of a general natural lift structure (G, J) on T*M.
struct StructureConfig {
  ScalarCurve a1 = ScalarCurve::constant(1.0);
  ScalarCurve a3 = ScalarCurve::constant(0.0);
  // Empty: b1, b2, b3 come from the integrability formulas.
  std::optional<ScalarCurve> b1;
  std::optional<ScalarCurve> b3;
  ScalarCurve lambda = ScalarCurve::constant(1.0);
  // Empty: mu = lambda' (the Kahler choice).
  std::optional<ScalarCurve> mu;
  Perturbation perturbation;

  bool integrable_mode() const { return !b1; }
  bool kahler_mu() const { return !mu; }
};

// All coefficient data at one point of T*M.
struct PointCoefficients {
  double t = 0.0;
  CurveJet a1, a3, lambda;
  LiftCoefficients lift;
  MetricCoefficients metric;
  // Integrability denominator; NaN for explicit b-coefficients.
  double denominator = 0.0;
};

class LiftStructure {
 public:
  // Throws InvalidArgument if only one of b1, b3 is set.
  LiftStructure(SpaceForm space, StructureConfig config);

  const SpaceForm& space() const { return space_; }
  const StructureConfig& config() const { return config_; }

  // Throws whatever the coefficient algebra throws at this point.
  PointCoefficients coefficients(const ChartPoint& pt) const;

  // Empty when the point satisfies every positivity condition and, in integrable
  // mode, |D| > margin; otherwise the reason for rejection.
  std::optional<std::string> rejection(const ChartPoint& pt, double denominator_margin = 1e-6) const;

  FrameTensor acs(const ChartPoint& pt) const;
  FrameTensor metric(const ChartPoint& pt) const;
  FrameTensor omega(const ChartPoint& pt) const;

  TensorField acs_field() const;
  TensorField metric_field() const;
  TensorField omega_field() const;

 private:
  SpaceForm space_;
  StructureConfig config_;
};

}  // namespace klift
