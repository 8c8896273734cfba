#include "klift/scalar_curve.hpp"

#include "klift/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace klift {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, std::string(what) + " must be finite");
  }
}

}  // namespace

ScalarCurve::ScalarCurve(CurveFamily family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  require_finite(params_, "curve parameters");
}

ScalarCurve ScalarCurve::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial needs at least one coefficient");
  return ScalarCurve(CurveFamily::polynomial, std::move(coeffs));
}

ScalarCurve ScalarCurve::exponential(double amplitude, double rate) {
  return ScalarCurve(CurveFamily::exponential, {amplitude, rate});
}

ScalarCurve ScalarCurve::constant(double value) { return ScalarCurve(CurveFamily::constant, {value}); }

CurveJet ScalarCurve::jet(double t) const {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorCode::NonFiniteInput, "curve argument must be a finite nonnegative real, got " + std::to_string(t));
  }
  switch (family_) {
    case CurveFamily::constant:
      return {params_[0], 0.0, 0.0};
    case CurveFamily::exponential: {
      const double a = params_[0], k = params_[1];
      const double e = a * std::exp(k * t);
      return {e, k * e, k * k * e};
    }
    case CurveFamily::polynomial: {
      // Horner on p, p', p'' simultaneously.
      double v = 0.0, d1 = 0.0, d2 = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) {
        d2 = d2 * t + 2.0 * d1;
        d1 = d1 * t + v;
        v = v * t + *it;
      }
      return {v, d1, d2};
    }
  }
  return {};
}

CurveJet eval_jet(const ScalarCurve& curve, double t) { return curve.jet(t); }

double check_derivative_consistency(const ScalarCurve& curve, double t, double h) {
  if (!(h > 0.0) || !(t >= h)) throw Error(ErrorCode::InvalidArgument, "need t >= h > 0");
  const CurveJet j = curve.jet(t);
  const double fp = curve(t + h), fm = curve(t - h);
  const double cd1 = (fp - fm) / (2.0 * h);
  const double cd2 = (fp - 2.0 * j.value + fm) / (h * h);
  return std::max(std::abs(j.d1 - cd1), std::abs(j.d2 - cd2)) / (1.0 + std::abs(j.value));
}

}  // namespace klift
