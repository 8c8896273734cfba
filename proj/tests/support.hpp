#pragma once

#include "klift/bundle_calculus.hpp"
#include "klift/config.hpp"
#include "klift/error.hpp"
#include "klift/structure.hpp"
#include "klift/verifier.hpp"

#include <doctest.h>

#include <random>

namespace ktest {

using namespace klift;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Vector random_in_ball(std::mt19937& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = u(rng);
    if (v.norm() <= 1.0) return radius * v;
  }
}

inline ChartPoint random_point(std::mt19937& rng, int n, double q_radius, double p_radius) {
  return {random_in_ball(rng, n, q_radius), random_in_ball(rng, n, p_radius)};
}

// c = 1, a1 = 1 + t, a3 = t, integrable b, lambda = 1 + t
inline StructureConfig three_parameter() {
  StructureConfig s;
  s.a1 = ScalarCurve::polynomial({1.0, 1.0});
  s.a3 = ScalarCurve::polynomial({0.0, 1.0});
  s.lambda = ScalarCurve::polynomial({1.0, 1.0});
  return s;
}

inline StructureConfig canonical() { return StructureConfig{}; }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected klift::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace ktest
