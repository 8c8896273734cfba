#include "klift/space_form.hpp"

#include "klift/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace klift {

namespace {

double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

SpaceForm::SpaceForm(int n, double c, std::optional<double> chart_radius) : n_(n), c_(c) {
  if (n < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "base dimension must be at least 3 for the integrability theory, got " + std::to_string(n));
  }
  if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "curvature constant must be finite");
  const double natural =
      c < 0.0 ? 2.0 / std::sqrt(-c) : std::numeric_limits<double>::infinity();
  if (chart_radius) {
    if (!(*chart_radius > 0.0) || *chart_radius > natural) {
      throw Error(ErrorCode::InvalidArgument,
                  "chart_radius must lie in (0, " + std::to_string(natural) + "]");
    }
    radius_ = *chart_radius;
  } else {
    radius_ = natural;
  }
}

double SpaceForm::default_sampling_radius() const { return std::min(0.5, 0.9 * radius_); }

bool SpaceForm::admissible(const Vector& x) const {
  return x.size() == n_ && x.allFinite() && x.norm() < radius_ && conformal_denominator(x) > 0.0;
}

void SpaceForm::require_admissible(const Vector& x) const {
  if (x.size() != n_) throw Error(ErrorCode::InvalidArgument, "chart point has wrong dimension");
  if (!admissible(x)) {
    throw Error(ErrorCode::OutsideChart,
                "|x| = " + std::to_string(x.norm()) + " not below chart radius " + std::to_string(radius_));
  }
}

double SpaceForm::conformal_denominator(const Vector& x) const { return 1.0 + 0.25 * c_ * x.squaredNorm(); }

// sigma = -log(1 + c|x|^2/4)
Vector SpaceForm::log_factor_gradient(const Vector& x) const {
  return (-0.5 * c_ / conformal_denominator(x)) * x;
}

Matrix SpaceForm::log_factor_hessian(const Vector& x) const {
  const double f = conformal_denominator(x);
  Matrix h = Matrix::Identity(n_, n_) * (-0.5 * c_ / f);
  h += (0.25 * c_ * c_ / (f * f)) * x * x.transpose();
  return h;
}

Matrix SpaceForm::metric(const Vector& x) const {
  require_admissible(x);
  const double f = conformal_denominator(x);
  return Matrix::Identity(n_, n_) / (f * f);
}

Matrix SpaceForm::inverse_metric(const Vector& x) const {
  require_admissible(x);
  const double f = conformal_denominator(x);
  return Matrix::Identity(n_, n_) * (f * f);
}

// Gamma^k_ij = delta^k_i s_j + delta^k_j s_i - delta_ij s_k for a conformally flat metric.
Tensor3 SpaceForm::christoffel(const Vector& x) const {
  require_admissible(x);
  const Vector s = log_factor_gradient(x);
  Tensor3 gamma(n_);
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        gamma(k, i, j) = kron(k, i) * s[j] + kron(k, j) * s[i] - kron(i, j) * s[k];
  return gamma;
}

Tensor4 SpaceForm::christoffel_derivative(const Vector& x) const {
  require_admissible(x);
  const Matrix hs = log_factor_hessian(x);
  Tensor4 d(n_);
  for (int l = 0; l < n_; ++l)
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          d(l, k, i, j) = kron(k, i) * hs(j, l) + kron(k, j) * hs(i, l) - kron(i, j) * hs(k, l);
  return d;
}

// R^h_kij = d_i Gamma^h_jk - d_j Gamma^h_ik + Gamma^h_im Gamma^m_jk - Gamma^h_jm Gamma^m_ik
Tensor4 SpaceForm::curvature(const Vector& x) const {
  const Tensor3 gamma = christoffel(x);
  const Tensor4 dgamma = christoffel_derivative(x);
  Tensor4 r(n_);
  for (int h = 0; h < n_; ++h)
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          double v = dgamma(i, h, j, k) - dgamma(j, h, i, k);
          for (int m = 0; m < n_; ++m) v += gamma(h, i, m) * gamma(m, j, k) - gamma(h, j, m) * gamma(m, i, k);
          r(h, k, i, j) = v;
        }
  return r;
}

Tensor4 SpaceForm::constant_curvature_model(const Vector& x) const {
  const Matrix g = metric(x);
  Tensor4 r(n_);
  for (int h = 0; h < n_; ++h)
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(h, k, i, j) = c_ * (kron(h, i) * g(k, j) - kron(h, j) * g(k, i));
  return r;
}

BasePointData SpaceForm::base_point(const Vector& x) const {
  return {x, metric(x), inverse_metric(x), christoffel(x)};
}

double SpaceForm::energy_density(const Vector& q, const Vector& p) const {
  if (p.size() != n_) throw Error(ErrorCode::InvalidArgument, "covector has wrong dimension");
  if (!p.allFinite()) throw Error(ErrorCode::NonFiniteInput, "covector must be finite");
  return 0.5 * p.dot(inverse_metric(q) * p);
}

}  // namespace klift
