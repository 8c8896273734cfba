#include "klift/structure.hpp"

#include "klift/error.hpp"

#include <cmath>
#include <limits>

namespace klift {

LiftStructure::LiftStructure(SpaceForm space, StructureConfig config)
    : space_(std::move(space)), config_(std::move(config)) {
  if (config_.b1.has_value() != config_.b3.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "explicit b-coefficients need both b1 and b3");
  }
}

PointCoefficients LiftStructure::coefficients(const ChartPoint& pt) const {
  PointCoefficients pc;
  pc.t = space_.energy_density(pt.q, pt.p);
  const double t = pc.t;
  pc.a1 = config_.a1.jet(t);
  pc.a3 = config_.a3.jet(t);
  pc.lambda = config_.lambda.jet(t);

  double b1 = 0.0, b3 = 0.0;
  if (config_.integrable_mode()) {
    const IntegrableB b = integrable_b(pc.a1, pc.a3, space_.curvature_constant(), t);
    b1 = b.b1;
    b3 = b.b3;
    pc.denominator = b.denominator;
  } else {
    b1 = (*config_.b1)(t);
    b3 = (*config_.b3)(t);
    pc.denominator = std::numeric_limits<double>::quiet_NaN();
  }
  const Perturbation& pert = config_.perturbation;
  pc.lift = complete_acs(pc.a1.value, pc.a3.value, b1 + pert.b1_delta, b3 + pert.b3_delta, t);

  const double mu = (config_.kahler_mu() ? pc.lambda.d1 : (*config_.mu)(t)) + pert.mu_delta;
  pc.metric = metric_coefficients(pc.lift, pc.lambda.value, mu);
  pc.metric.c1 *= pert.c1_scale;
  return pc;
}

std::optional<std::string> LiftStructure::rejection(const ChartPoint& pt, double denominator_margin) const {
  try {
    const PointCoefficients pc = coefficients(pt);
    if (config_.integrable_mode() && !(std::abs(pc.denominator) > denominator_margin)) {
      return "integrability denominator within margin";
    }
    const LiftCoefficients& k = pc.lift;
    if (!(k.a2 > 0.0) || !(k.a2 + 2.0 * k.t * k.b2 > 0.0)) return "a2 or a2 + 2t b2 not positive";
    if (!(metric_positivity_margin(pc.metric) > 0.0)) return "metric positivity violated";
  } catch (const Error& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

FrameTensor LiftStructure::acs(const ChartPoint& pt) const { return acs_matrix(space_, pt, coefficients(pt).lift); }

FrameTensor LiftStructure::metric(const ChartPoint& pt) const {
  return metric_matrix(space_, pt, coefficients(pt).metric);
}

FrameTensor LiftStructure::omega(const ChartPoint& pt) const {
  const PointCoefficients pc = coefficients(pt);
  return omega_matrix(space_, pt, pc.metric.lambda, pc.metric.mu);
}

TensorField LiftStructure::acs_field() const {
  return [this](const ChartPoint& pt) { return acs(pt); };
}

TensorField LiftStructure::metric_field() const {
  return [this](const ChartPoint& pt) { return metric(pt); };
}

TensorField LiftStructure::omega_field() const {
  return [this](const ChartPoint& pt) { return omega(pt); };
}

}  // namespace klift
