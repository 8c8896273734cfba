#include "klift/lift_algebra.hpp"

#include "klift/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace klift {

namespace {

double rel(double lhs, double rhs) { return std::abs(lhs - rhs) / (1.0 + std::abs(rhs)); }

}  // namespace

AcsIdentityResiduals acs_identity_residuals(const LiftCoefficients& lc) {
  const double t2 = 2.0 * lc.t;
  const double rad3 = lc.a3 + t2 * lc.b3;
  return {rel(lc.a1 * lc.a2, 1.0 + lc.a3 * lc.a3),
          rel((lc.a1 + t2 * lc.b1) * (lc.a2 + t2 * lc.b2), 1.0 + rad3 * rad3)};
}

LiftCoefficients complete_acs(double a1, double a3, double b1, double b3, double t) {
  if (!std::isfinite(a1) || !std::isfinite(a3) || !std::isfinite(b1) || !std::isfinite(b3) || !std::isfinite(t) ||
      t < 0.0) {
    throw Error(ErrorCode::NonFiniteInput, "coefficients must be finite and t >= 0");
  }
  const double radial1 = a1 + 2.0 * t * b1;
  if (a1 <= 0.0 || radial1 <= 0.0) {
    throw Error(ErrorCode::PositivityViolation,
                "need a1 > 0 and a1 + 2t b1 > 0 (a1 = " + std::to_string(a1) + ", a1 + 2t b1 = " +
                    std::to_string(radial1) + ")");
  }
  LiftCoefficients lc;
  lc.t = t;
  lc.a1 = a1;
  lc.a3 = a3;
  lc.b1 = b1;
  lc.b3 = b3;
  lc.a2 = (1.0 + a3 * a3) / a1;
  lc.b2 = (2.0 * a3 * b3 - lc.a2 * b1 + 2.0 * t * b3 * b3) / radial1;
  lc.a4 = -a3;
  lc.b4 = -b3;
  return lc;
}

CurveJet derived_a2(const CurveJet& a1, const CurveJet& a3) {
  const double u = 1.0 + a3.value * a3.value;
  const double du = 2.0 * a3.value * a3.d1;
  const double ddu = 2.0 * a3.d1 * a3.d1 + 2.0 * a3.value * a3.d2;
  const double v = a1.value;
  return {u / v, (du * v - u * a1.d1) / (v * v),
          ddu / v - 2.0 * du * a1.d1 / (v * v) - u * a1.d2 / (v * v) + 2.0 * u * a1.d1 * a1.d1 / (v * v * v)};
}

double integrability_denominator(const CurveJet& a1, const CurveJet& a3, double c, double t) {
  const CurveJet a2 = derived_a2(a1, a3);
  return a1.value - 2.0 * t * a1.d1 - 2.0 * c * t * a2.value - 4.0 * c * t * t * a2.d1;
}

IntegrableB integrable_b(const CurveJet& a1j, const CurveJet& a3j, double c, double t) {
  if (!(a1j.value > 0.0)) {
    throw Error(ErrorCode::PositivityViolation, "a1(t) must be positive, got " + std::to_string(a1j.value));
  }
  const CurveJet a2j = derived_a2(a1j, a3j);
  const double a1 = a1j.value, da1 = a1j.d1;
  const double a2 = a2j.value, da2 = a2j.d1;
  const double a3 = a3j.value, da3 = a3j.d1;
  const double den = a1 - 2.0 * t * da1 - 2.0 * c * t * a2 - 4.0 * c * t * t * da2;
  if (!(std::abs(den) > kSingularDenominator)) {
    throw Error(ErrorCode::SingularDenominator,
                "integrability denominator " + std::to_string(den) + " at t = " + std::to_string(t));
  }
  IntegrableB b;
  b.denominator = den;
  b.b1 = (2.0 * c * c * t * a2 * a2 + 2.0 * c * t * a1 * da2 + a1 * da1 - c + 3.0 * c * a3 * a3) / den;
  b.b2 = (2.0 * t * da3 * da3 - 2.0 * t * da1 * da2 + c * a2 * a2 + 2.0 * c * t * a2 * da2 + a1 * da2) / den;
  b.b3 = (a1 * da3 + 2.0 * c * a2 * a3 + 4.0 * c * t * da2 * a3 - 2.0 * c * t * a2 * da3) / den;
  return b;
}

IntegrableB integrable_b(const ScalarCurve& a1, const ScalarCurve& a3, double c, double t) {
  return integrable_b(a1.jet(t), a3.jet(t), c, t);
}

double ProofIdentityResiduals::max() const {
  double m = std::max({a1_prime, a3_prime, a2_prime, product});
  if (a2p) m = std::max(m, *a2p);
  return m;
}

ProofIdentityResiduals proof_identity_residuals(const CurveJet& a1j, const CurveJet& a3j, double b1, double b2,
                                                double b3, double c, double t) {
  const CurveJet a2j = derived_a2(a1j, a3j);
  const double a1 = a1j.value, a2 = a2j.value, a3 = a3j.value;
  const double radial1 = a1 + 2.0 * t * b1;
  if (!(std::abs(radial1) > kSingularDenominator)) {
    throw Error(ErrorCode::SingularDenominator, "a1 + 2t b1 vanishes");
  }
  ProofIdentityResiduals r;
  const double shifted3 = a3 + t * b3;
  if (std::abs(shifted3) > kSingularDenominator) {
    r.a2p = std::abs(a2j.d1 - (a2 * a3j.d1 + 2.0 * a3 * b2 - a2 * b3) / (2.0 * shifted3));
  }
  r.a1_prime = std::abs(a1j.d1 - (a1 * b1 + c * (1.0 - 3.0 * a3 * a3 - 4.0 * t * a3 * b3)) / radial1);
  r.a3_prime = std::abs(a3j.d1 - (a1 * b3 - 2.0 * c * a2 * shifted3) / radial1);
  r.a2_prime = std::abs(a2j.d1 - (2.0 * a3 * b3 - a2 * b1 - c * a2 * a2) / radial1);
  r.product = std::abs(a1 * a2j.d1 + a1j.d1 * a2 - 2.0 * a3 * a3j.d1);
  return r;
}

ProofIdentityResiduals integrability_consistency(const ScalarCurve& a1, const ScalarCurve& a3, double c, double t) {
  const CurveJet a1j = a1.jet(t), a3j = a3.jet(t);
  const IntegrableB b = integrable_b(a1j, a3j, c, t);
  return proof_identity_residuals(a1j, a3j, b.b1, b.b2, b.b3, c, t);
}

double metric_positivity_margin(const MetricCoefficients& mc) {
  const double t2 = 2.0 * mc.t;
  const double r1 = mc.c1 + t2 * mc.d1, r2 = mc.c2 + t2 * mc.d2, r3 = mc.c3 + t2 * mc.d3;
  return std::min({mc.c1, mc.c2, mc.c1 * mc.c2 - mc.c3 * mc.c3, r1, r2, r1 * r2 - r3 * r3});
}

MetricCoefficients metric_coefficients(const LiftCoefficients& lc, double lambda, double mu) {
  if (!std::isfinite(lambda) || !std::isfinite(mu)) throw Error(ErrorCode::NonFiniteInput, "lambda, mu must be finite");
  const double radial = lambda + 2.0 * lc.t * mu;
  if (lambda <= 0.0 || radial <= 0.0) {
    throw Error(ErrorCode::ProportionalityDomain, "need lambda > 0 and lambda + 2t mu > 0 (lambda = " +
                                                      std::to_string(lambda) + ", lambda + 2t mu = " +
                                                      std::to_string(radial) + ")");
  }
  const double t2 = 2.0 * lc.t;
  MetricCoefficients mc;
  mc.t = lc.t;
  mc.lambda = lambda;
  mc.mu = mu;
  mc.c1 = lambda * lc.a1;
  mc.c2 = lambda * lc.a2;
  mc.c3 = lambda * lc.a3;
  mc.d1 = lambda * lc.b1 + mu * (lc.a1 + t2 * lc.b1);
  mc.d2 = lambda * lc.b2 + mu * (lc.a2 + t2 * lc.b2);
  mc.d3 = lambda * lc.b3 + mu * (lc.a3 + t2 * lc.b3);
  if (!(metric_positivity_margin(mc) > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "metric coefficients violate the positivity conditions");
  }
  return mc;
}

double hermitian_system_residual(const LiftCoefficients& lc, double c1, double c2, double c3) {
  const double a1 = lc.a1, a2 = lc.a2, a3 = lc.a3;
  const double e1 = (a3 * a3 - 1.0) * c1 + a1 * a1 * c2 - 2.0 * a1 * a3 * c3;
  const double e2 = a2 * a2 * c1 + (a3 * a3 - 1.0) * c2 - 2.0 * a2 * a3 * c3;
  const double e3 = a2 * a3 * c1 + a1 * a3 * c2 - 2.0 * a1 * a2 * c3;
  return std::max({std::abs(e1), std::abs(e2), std::abs(e3)});
}

double kahler_mu(const ScalarCurve& lambda, double t) {
  const CurveJet l = lambda.jet(t);
  if (l.value <= 0.0 || l.value + 2.0 * t * l.d1 <= 0.0) {
    throw Error(ErrorCode::ProportionalityDomain, "need lambda > 0 and lambda + 2t lambda' > 0");
  }
  return l.d1;
}

}  // namespace klift
