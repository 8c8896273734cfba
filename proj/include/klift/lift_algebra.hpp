#pragma once

#include "klift/scalar_curve.hpp"

#include <optional>

namespace klift {

// Pointwise coefficients of the natural almost complex structure J at energy density t.
struct LiftCoefficients {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
  double t = 0;
};

// Pointwise coefficients of the natural metric G at energy density t.
struct MetricCoefficients {
  double c1 = 0, c2 = 0, c3 = 0;
  double d1 = 0, d2 = 0, d3 = 0;
  double lambda = 0, mu = 0;
  double t = 0;
};

// Relative residuals of
//   a1 a2 = 1 + a3^2
//   (a1 + 2t b1)(a2 + 2t b2) = 1 + (a3 + 2t b3)^2
// each divided by (1 + |rhs|).
struct AcsIdentityResiduals {
  double transverse = 0;
  double radial = 0;
  double max() const { return transverse > radial ? transverse : radial; }
};

AcsIdentityResiduals acs_identity_residuals(const LiftCoefficients& lc);

// Fills a2, b2, a4, b4 from the free coefficients so that J^2 = -I.
// Throws PositivityViolation if a1 <= 0 or a1 + 2t b1 <= 0.
LiftCoefficients complete_acs(double a1, double a3, double b1, double b3, double t);

// Jet of a2 = (1 + a3^2)/a1.
CurveJet derived_a2(const CurveJet& a1, const CurveJet& a3);

// Shared denominator a1 - 2t a1' - 2ct a2 - 4ct^2 a2' of the integrable b-coefficients.
double integrability_denominator(const CurveJet& a1, const CurveJet& a3, double c, double t);

struct IntegrableB {
  double b1 = 0, b2 = 0, b3 = 0;
  double denominator = 0;
};

inline constexpr double kSingularDenominator = 1e-8;

// The unique b1, b2, b3 making J integrable over a space form of curvature c.
// Throws PositivityViolation if a1(t) <= 0 and SingularDenominator if |D| <= 1e-8.
IntegrableB integrable_b(const CurveJet& a1, const CurveJet& a3, double c, double t);
IntegrableB integrable_b(const ScalarCurve& a1, const ScalarCurve& a3, double c, double t);

// Absolute residuals of the relations a vanishing Nijenhuis tensor imposes on
// (a1, a2, a3) and their t-derivatives:
//   a2p:        a2' = (a2 a3' + 2 a3 b2 - a2 b3) / (2 (a3 + t b3))
//   a1_prime:   a1' = (a1 b1 + c (1 - 3 a3^2 - 4 t a3 b3)) / (a1 + 2t b1)
//   a3_prime:   a3' = (a1 b3 - 2 c a2 (a3 + t b3)) / (a1 + 2t b1)
//   a2_prime:   a2' = (2 a3 b3 - a2 b1 - c a2^2) / (a1 + 2t b1)
//   product:    a1 a2' + a1' a2 = 2 a3 a3'
// a2p is empty when |a3 + t b3| <= 1e-8 (the relation divides by it).
struct ProofIdentityResiduals {
  std::optional<double> a2p;
  double a1_prime = 0;
  double a3_prime = 0;
  double a2_prime = 0;
  double product = 0;
  double max() const;
};

ProofIdentityResiduals proof_identity_residuals(const CurveJet& a1, const CurveJet& a3, double b1, double b2,
                                                double b3, double c, double t);

// proof_identity_residuals evaluated at the integrable b-coefficients.
ProofIdentityResiduals integrability_consistency(const ScalarCurve& a1, const ScalarCurve& a3, double c, double t);

// c_i = lambda a_i, d_i = lambda b_i + mu (a_i + 2t b_i).
// Throws ProportionalityDomain if lambda <= 0 or lambda + 2t mu <= 0, and
// NotPositiveDefinite if the resulting metric fails the positivity conditions.
MetricCoefficients metric_coefficients(const LiftCoefficients& lc, double lambda, double mu);

// Positivity margins of a metric coefficient record: the transverse block needs
// c1 > 0, c2 > 0, c1 c2 - c3^2 > 0 and the radial block the same with c_i + 2t d_i.
// Returns the smallest of the six quantities.
double metric_positivity_margin(const MetricCoefficients& mc);

// Max absolute residual of the homogeneous system
//   (a3^2 - 1) c1 + a1^2 c2 - 2 a1 a3 c3 = 0
//   a2^2 c1 + (a3^2 - 1) c2 - 2 a2 a3 c3 = 0
//   a2 a3 c1 + a1 a3 c2 - 2 a1 a2 c3 = 0
// whose nonzero solutions are exactly (c1, c2, c3) proportional to (a1, a2, a3).
double hermitian_system_residual(const LiftCoefficients& lc, double c1, double c2, double c3);

// mu = lambda'(t), the value closing the fundamental 2-form.
// Throws ProportionalityDomain unless lambda > 0 and lambda + 2t lambda' > 0.
double kahler_mu(const ScalarCurve& lambda, double t);

}  // namespace klift
