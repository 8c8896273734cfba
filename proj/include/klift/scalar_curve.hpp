#pragma once

#include <span>
#include <vector>

namespace klift {

enum class CurveFamily { polynomial, exponential, constant };

// Value and first two derivatives of a curve at one t.
struct CurveJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// A coefficient function of the energy density t >= 0.
//
// polynomial:  sum_k coeffs[k] t^k       (parameters = coeffs, ascending degree)
// exponential: A exp(k t)                (parameters = {A, k})
// constant:    value                     (parameters = {value})
//
// Derivatives are closed form; nothing here differentiates numerically.
class ScalarCurve {
 public:
  static ScalarCurve polynomial(std::vector<double> coeffs);
  static ScalarCurve exponential(double amplitude, double rate);
  static ScalarCurve constant(double value);

  CurveFamily family() const { return family_; }
  std::span<const double> parameters() const { return params_; }

  CurveJet jet(double t) const;
  double operator()(double t) const { return jet(t).value; }

  friend bool operator==(const ScalarCurve&, const ScalarCurve&) = default;

 private:
  ScalarCurve(CurveFamily family, std::vector<double> params);

  CurveFamily family_ = CurveFamily::constant;
  std::vector<double> params_;
};

// Throws NonFiniteInput unless t is a finite nonnegative real.
CurveJet eval_jet(const ScalarCurve& curve, double t);

// max(|d1 - D1_h|, |d2 - D2_h|) / (1 + |value|) with D1_h, D2_h the central
// first and second differences at step h. Requires t >= h > 0.
double check_derivative_consistency(const ScalarCurve& curve, double t, double h);

}  // namespace klift
