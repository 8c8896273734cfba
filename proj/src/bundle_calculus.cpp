#include "klift/bundle_calculus.hpp"

#include "klift/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace klift {

namespace {

double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

void require_point(const SpaceForm& sf, const ChartPoint& pt) {
  if (pt.q.size() != sf.dim() || pt.p.size() != sf.dim()) {
    throw Error(ErrorCode::InvalidArgument, "chart point dimension does not match the base manifold");
  }
  if (!pt.q.allFinite() || !pt.p.allFinite()) throw Error(ErrorCode::NonFiniteInput, "chart point must be finite");
}

void require_coefficient_t(double coeff_t, double point_t) {
  if (std::abs(coeff_t - point_t) > 1e-12 * std::max(1.0, std::abs(point_t))) {
    throw Error(ErrorCode::CoefficientMismatch, "coefficients evaluated at t = " + std::to_string(coeff_t) +
                                                    " but the point has t = " + std::to_string(point_t));
  }
}

// Gamma0(h, i) = p_k Gamma^k_ih
Matrix connection_block(const BasePointData& base, const Vector& p) {
  const int n = static_cast<int>(p.size());
  Matrix g0 = Matrix::Zero(n, n);
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) g0(h, i) += p[k] * base.gamma(k, i, h);
  return g0;
}

std::vector<double> steps(const Vector& z, double h) {
  std::vector<double> s(static_cast<std::size_t>(z.size()));
  for (int d = 0; d < z.size(); ++d) s[static_cast<std::size_t>(d)] = h * (1.0 + std::abs(z[d]));
  return s;
}

void require_stencil(const SpaceForm& sf, const ChartPoint& pt, const Stencil& stencil) {
  require_point(sf, pt);
  if (!(stencil.h > 0.0)) throw Error(ErrorCode::InvalidArgument, "stencil step must be positive");
  double reach = 0.0;
  for (int d = 0; d < pt.q.size(); ++d) reach = std::max(reach, stencil.h * (1.0 + std::abs(pt.q[d])));
  if (!(pt.q.norm() + 2.0 * reach < sf.chart_radius())) {
    throw Error(ErrorCode::StencilOutsideChart, "stencil around |q| = " + std::to_string(pt.q.norm()) +
                                                    " leaves the chart of radius " +
                                                    std::to_string(sf.chart_radius()));
  }
}

using StateFunction = std::function<Matrix(const Vector&)>;

std::vector<Matrix> central_partials(const StateFunction& f, const Vector& z, double h) {
  const std::vector<double> s = steps(z, h);
  std::vector<Matrix> out;
  out.reserve(s.size());
  for (int d = 0; d < z.size(); ++d) {
    Vector zp = z, zm = z;
    zp[d] += s[static_cast<std::size_t>(d)];
    zm[d] -= s[static_cast<std::size_t>(d)];
    out.push_back((f(zp) - f(zm)) / (2.0 * s[static_cast<std::size_t>(d)]));
  }
  return out;
}

// out[d] = d/dz^d f(z)
std::vector<Matrix> partials(const StateFunction& f, const Vector& z, const Stencil& stencil) {
  std::vector<Matrix> coarse = central_partials(f, z, stencil.h);
  if (!stencil.richardson) return coarse;
  std::vector<Matrix> fine = central_partials(f, z, 0.5 * stencil.h);
  for (std::size_t d = 0; d < coarse.size(); ++d) coarse[d] = (4.0 * fine[d] - coarse[d]) / 3.0;
  return coarse;
}

StateFunction coordinate_field(const SpaceForm& sf, const TensorField& field) {
  return [&sf, &field](const Vector& z) {
    const ChartPoint pt = ChartPoint::from_state(z);
    return coordinate_components(sf, pt, field(pt));
  };
}

Matrix frame_inverse(const Matrix& frame) {
  Eigen::FullPivLU<Matrix> lu(frame);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularFrame, "change of basis is not invertible");
  return lu.inverse();
}

}  // namespace

Vector ChartPoint::state() const {
  Vector z(q.size() + p.size());
  z << q, p;
  return z;
}

ChartPoint ChartPoint::from_state(const Vector& z) {
  if (z.size() % 2 != 0) throw Error(ErrorCode::InvalidArgument, "state vector must have even length");
  const auto n = z.size() / 2;
  return {z.head(n), z.tail(n)};
}

Matrix adapted_frame(const SpaceForm& sf, const ChartPoint& pt) {
  require_point(sf, pt);
  const int n = sf.dim();
  Matrix a = Matrix::Identity(2 * n, 2 * n);
  a.bottomLeftCorner(n, n) = connection_block(sf.base_point(pt.q), pt.p);
  return a;
}

FrameTensor acs_matrix(const SpaceForm& sf, const ChartPoint& pt, const LiftCoefficients& k) {
  require_point(sf, pt);
  const int n = sf.dim();
  const BasePointData base = sf.base_point(pt.q);
  const Vector& p = pt.p;
  const Vector g0 = base.g_inv * p;
  require_coefficient_t(k.t, 0.5 * p.dot(g0));

  Matrix j(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < n; ++r) {
      // column i: J(delta_i)
      j(r, i) = k.a4 * kron(r, i) + k.b4 * g0[r] * p[i];
      j(n + r, i) = k.a1 * base.g(i, r) + k.b1 * p[i] * p[r];
      // column n+i: J(d/dp_i)
      j(r, n + i) = -(k.a2 * base.g_inv(i, r) + k.b2 * g0[i] * g0[r]);
      j(n + r, n + i) = k.a3 * kron(i, r) + k.b3 * g0[i] * p[r];
    }
  }
  return {TensorKind::acs, Frame::adapted, std::move(j)};
}

FrameTensor metric_matrix(const SpaceForm& sf, const ChartPoint& pt, const MetricCoefficients& mc) {
  require_point(sf, pt);
  const int n = sf.dim();
  const BasePointData base = sf.base_point(pt.q);
  const Vector& p = pt.p;
  const Vector g0 = base.g_inv * p;
  require_coefficient_t(mc.t, 0.5 * p.dot(g0));

  Matrix g(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < n; ++r) {
      g(i, r) = mc.c1 * base.g(i, r) + mc.d1 * p[i] * p[r];
      g(n + i, n + r) = mc.c2 * base.g_inv(i, r) + mc.d2 * g0[i] * g0[r];
      g(i, n + r) = mc.c3 * kron(i, r) + mc.d3 * p[i] * g0[r];
      g(n + r, i) = g(i, n + r);
    }
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "metric is not positive definite");
  return {TensorKind::metric, Frame::adapted, std::move(g)};
}

FrameTensor omega_matrix(const SpaceForm& sf, const ChartPoint& pt, double lambda, double mu) {
  require_point(sf, pt);
  const int n = sf.dim();
  const Vector g0 = sf.inverse_metric(pt.q) * pt.p;
  Matrix w = Matrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = lambda * kron(i, j) + mu * g0[i] * pt.p[j];
      w(n + i, j) = v;
      w(j, n + i) = -v;
    }
  return {TensorKind::two_form, Frame::adapted, std::move(w)};
}

FrameTensor to_coordinate_frame(const FrameTensor& t, const Matrix& frame) {
  const Matrix inv = frame_inverse(frame);
  FrameTensor out{t.kind, Frame::coordinate, {}};
  out.components = t.kind == TensorKind::acs ? Matrix(frame * t.components * inv)
                                              : Matrix(inv.transpose() * t.components * inv);
  return out;
}

FrameTensor to_adapted_frame(const FrameTensor& t, const Matrix& frame) {
  const Matrix inv = frame_inverse(frame);
  FrameTensor out{t.kind, Frame::adapted, {}};
  out.components = t.kind == TensorKind::acs ? Matrix(inv * t.components * frame)
                                              : Matrix(frame.transpose() * t.components * frame);
  return out;
}

Matrix coordinate_components(const SpaceForm& sf, const ChartPoint& pt, const FrameTensor& t) {
  if (t.frame == Frame::coordinate) return t.components;
  return to_coordinate_frame(t, adapted_frame(sf, pt)).components;
}

Tensor3 nijenhuis(const SpaceForm& sf, const TensorField& acs, const ChartPoint& pt, const Stencil& stencil) {
  require_stencil(sf, pt, stencil);
  const StateFunction f = coordinate_field(sf, acs);
  const Vector z = pt.state();
  const Matrix j = f(z);
  const std::vector<Matrix> dj = partials(f, z, stencil);
  const int m = static_cast<int>(z.size());

  Tensor3 out(m);
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        double v = 0.0;
        for (int d = 0; d < m; ++d) {
          v += j(d, a) * dj[static_cast<std::size_t>(d)](c, b) - j(d, b) * dj[static_cast<std::size_t>(d)](c, a);
          v -= j(c, d) * (dj[static_cast<std::size_t>(a)](d, b) - dj[static_cast<std::size_t>(b)](d, a));
        }
        out(c, a, b) = v;
        out(c, b, a) = -v;
      }
  return out;
}

double hermitian_residual(const FrameTensor& acs, const FrameTensor& metric) {
  if (acs.frame != metric.frame) throw Error(ErrorCode::FrameMismatch, "J and G are given in different frames");
  if (acs.kind != TensorKind::acs || metric.kind != TensorKind::metric) {
    throw Error(ErrorCode::InvalidArgument, "expected an almost complex structure and a metric");
  }
  const Matrix& j = acs.components;
  return max_abs(j.transpose() * metric.components * j - metric.components);
}

Tensor3 d_omega_numeric(const SpaceForm& sf, const TensorField& omega, const ChartPoint& pt,
                        const Stencil& stencil) {
  require_stencil(sf, pt, stencil);
  const StateFunction f = coordinate_field(sf, omega);
  const Vector z = pt.state();
  const std::vector<Matrix> dw = partials(f, z, stencil);
  const int m = static_cast<int>(z.size());

  Tensor3 out(m);
  auto at = [&](int d) -> const Matrix& { return dw[static_cast<std::size_t>(d)]; };
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) {
        const double v = at(a)(b, c) + at(b)(c, a) + at(c)(a, b);
        out(a, b, c) = v;
        out(b, c, a) = v;
        out(c, a, b) = v;
        out(b, a, c) = -v;
        out(a, c, b) = -v;
        out(c, b, a) = -v;
      }
  return out;
}

Tensor3 pull_back(const Tensor3& w, const Matrix& m) {
  const int d = w.dim();
  Tensor3 s1(d), s2(d), s3(d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int k = 0; k < d; ++k) {
        double v = 0.0;
        for (int c = 0; c < d; ++c) v += w(a, b, c) * m(c, k);
        s1(a, b, k) = v;
      }
  for (int a = 0; a < d; ++a)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double v = 0.0;
        for (int b = 0; b < d; ++b) v += s1(a, b, k) * m(b, j);
        s2(a, j, k) = v;
      }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double v = 0.0;
        for (int a = 0; a < d; ++a) v += s2(a, j, k) * m(a, i);
        s3(i, j, k) = v;
      }
  return s3;
}

Tensor3 d_omega_closed_form(const SpaceForm& sf, const ChartPoint& pt, const CurveJet& lambda, double mu) {
  require_point(sf, pt);
  const int n = sf.dim();
  const Vector g0 = sf.inverse_metric(pt.q) * pt.p;
  const double factor = lambda.d1 - mu;

  // On (d/dp_a, d/dp_b, delta_c) the form evaluates to factor (g^0a delta_bc - g^0b delta_ac).
  Tensor3 w(2 * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double v = factor * (g0[a] * kron(b, c) - g0[b] * kron(a, c));
        const int pa = n + a, pb = n + b;
        w(pa, pb, c) = v;
        w(pb, c, pa) = v;
        w(c, pa, pb) = v;
        w(pb, pa, c) = -v;
        w(pa, c, pb) = -v;
        w(c, pb, pa) = -v;
      }
  return pull_back(w, frame_inverse(adapted_frame(sf, pt)));
}

double covariant_derivative_J(const SpaceForm& sf, const TensorField& acs, const TensorField& metric,
                              const ChartPoint& pt, const Stencil& stencil) {
  require_stencil(sf, pt, stencil);
  const StateFunction fj = coordinate_field(sf, acs);
  const StateFunction fg = coordinate_field(sf, metric);
  const Vector z = pt.state();
  const int m = static_cast<int>(z.size());

  const Matrix j = fj(z);
  const Matrix g = fg(z);
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NotPositiveDefinite, "metric is not positive definite");
  const Matrix g_inv = llt.solve(Matrix::Identity(m, m));
  const std::vector<Matrix> dj = partials(fj, z, stencil);
  const std::vector<Matrix> dg = partials(fg, z, stencil);
  auto dG = [&](int e, int a, int b) { return dg[static_cast<std::size_t>(e)](a, b); };

  // chr(a, b, c) = Gamma^a_bc of G
  Tensor3 lower(m), chr(m);
  for (int d = 0; d < m; ++d)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) lower(d, b, c) = 0.5 * (dG(b, d, c) + dG(c, d, b) - dG(d, b, c));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double v = 0.0;
        for (int d = 0; d < m; ++d) v += g_inv(a, d) * lower(d, b, c);
        chr(a, b, c) = v;
      }

  // (nabla_e J)^b_c = d_e J^b_c + Gamma^b_ed J^d_c - Gamma^d_ec J^b_d
  double worst = 0.0;
  for (int e = 0; e < m; ++e)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        double v = dj[static_cast<std::size_t>(e)](b, c);
        for (int d = 0; d < m; ++d) v += chr(b, e, d) * j(d, c) - chr(d, e, c) * j(b, d);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

}  // namespace klift
