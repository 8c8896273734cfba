#pragma once

#include "klift/tensor.hpp"

#include <optional>

namespace klift {

// Everything the lift constructions need from the base manifold at one chart point.
struct BasePointData {
  Vector x;
  Matrix g;      // g_ij
  Matrix g_inv;  // g^ij
  Tensor3 gamma; // gamma(k, i, j) = Gamma^k_ij
};

// Simply connected model of constant sectional curvature c in the global conformal chart
//
//   g_ij(x) = delta_ij / (1 + (c/4)|x|^2)^2
//
// which is stereographic for c > 0, Euclidean for c = 0 and the Poincare ball of
// radius 2/sqrt(-c) for c < 0. Christoffel symbols, their derivatives and the
// curvature tensor are all evaluated in closed form.
class SpaceForm {
 public:
  // Throws InvalidArgument for n < 3, non-finite c, or a chart radius the chart cannot support.
  SpaceForm(int n, double c, std::optional<double> chart_radius = std::nullopt);

  int dim() const { return n_; }
  double curvature_constant() const { return c_; }
  // +infinity when c >= 0.
  double chart_radius() const { return radius_; }
  // min(0.5, 0.9 * chart_radius)
  double default_sampling_radius() const;

  bool admissible(const Vector& x) const;

  Matrix metric(const Vector& x) const;
  Matrix inverse_metric(const Vector& x) const;
  Tensor3 christoffel(const Vector& x) const;
  // d(l, k, i, j) = d/dx^l Gamma^k_ij
  Tensor4 christoffel_derivative(const Vector& x) const;
  // r(h, k, i, j) = R^h_kij with R(d_i, d_j) d_k = R^h_kij d_h.
  Tensor4 curvature(const Vector& x) const;
  // c (delta^h_i g_kj - delta^h_j g_ki)
  Tensor4 constant_curvature_model(const Vector& x) const;

  BasePointData base_point(const Vector& x) const;

  // t = (1/2) g^ik(q) p_i p_k
  double energy_density(const Vector& q, const Vector& p) const;

 private:
  void require_admissible(const Vector& x) const;
  double conformal_denominator(const Vector& x) const;  // 1 + (c/4)|x|^2
  Vector log_factor_gradient(const Vector& x) const;    // d_k sigma, g = exp(2 sigma) delta
  Matrix log_factor_hessian(const Vector& x) const;

  int n_;
  double c_;
  double radius_;
};

}  // namespace klift
