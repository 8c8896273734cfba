#pragma once

#include "klift/lift_algebra.hpp"
#include "klift/space_form.hpp"
#include "klift/tensor.hpp"

#include <functional>

namespace klift {

// A covector p over the base point q, in the chart induced on T*M.
struct ChartPoint {
  Vector q;
  Vector p;

  int dim() const { return static_cast<int>(q.size()); }
  // (q^1..q^n, p_1..p_n)
  Vector state() const;
  static ChartPoint from_state(const Vector& z);
};

enum class TensorKind { acs, metric, two_form };
enum class Frame { adapted, coordinate };

// A tensor on T*M at one point, as a 2n x 2n array. Index order is horizontal
// first, then vertical: slots 0..n-1 are delta/delta q^i (adapted) or d/dq^i
// (coordinate), slots n..2n-1 are d/dp_i in both frames.
//
// acs:       components(r, s) = J^r_s, so column s holds J applied to basis vector s.
// metric:    components(r, s) = G(E_r, E_s).
// two_form:  components(r, s) = Omega(E_r, E_s).
struct FrameTensor {
  TensorKind kind = TensorKind::acs;
  Frame frame = Frame::adapted;
  Matrix components;
};

// Central-difference settings. The step along state coordinate d is h (1 + |z_d|).
// With richardson set, D = (4 D_{h/2} - D_h)/3.
struct Stencil {
  double h = 5e-5;
  bool richardson = false;
};

using TensorField = std::function<FrameTensor(const ChartPoint&)>;

// Columns express (delta/delta q^i, d/dp_i) in the coordinate frame (d/dq^i, d/dp_i):
//   [ I        0 ]
//   [ Gamma0   I ]      Gamma0(h, i) = p_k Gamma^k_ih
Matrix adapted_frame(const SpaceForm& sf, const ChartPoint& pt);

// Blocks
//   J(delta_i)  = (a1 g_ij + b1 p_i p_j) d/dp_j + (a4 delta^j_i + b4 g^0j p_i) delta_j
//   J(d/dp_i)   = (a3 delta^i_j + b3 g^0i p_j) d/dp_j - (a2 g^ij + b2 g^0i g^0j) delta_j
// Throws CoefficientMismatch when coeffs.t is not the energy density of pt.
FrameTensor acs_matrix(const SpaceForm& sf, const ChartPoint& pt, const LiftCoefficients& coeffs);

// G(delta_i, delta_j) = c1 g_ij + d1 p_i p_j
// G(d/dp_i, d/dp_j)   = c2 g^ij + d2 g^0i g^0j
// G(delta_i, d/dp_j)  = c3 delta_ij + d3 p_i g^0j
// Throws CoefficientMismatch, or NotPositiveDefinite if the assembled matrix is not.
FrameTensor metric_matrix(const SpaceForm& sf, const ChartPoint& pt, const MetricCoefficients& mc);

// Omega(d/dp_i, delta_j) = lambda delta^i_j + mu g^0i p_j, zero on like pairs.
FrameTensor omega_matrix(const SpaceForm& sf, const ChartPoint& pt, double lambda, double mu);

// ACS: A T A^-1, bilinear kinds: A^-T T A^-1. Throws SingularFrame.
FrameTensor to_coordinate_frame(const FrameTensor& t, const Matrix& frame);
FrameTensor to_adapted_frame(const FrameTensor& t, const Matrix& frame);

// Coordinate-frame components of a field value, converting from the adapted frame when needed.
Matrix coordinate_components(const SpaceForm& sf, const ChartPoint& pt, const FrameTensor& t);

// n(c, a, b) = N^c_ab of N(X,Y) = [JX,JY] - J[JX,Y] - J[X,JY] - [X,Y], in coordinates:
//   N^c_ab = J^d_a d_d J^c_b - J^d_b d_d J^c_a - J^c_d (d_a J^d_b - d_b J^d_a)
// Throws StencilOutsideChart; field errors propagate.
Tensor3 nijenhuis(const SpaceForm& sf, const TensorField& acs, const ChartPoint& pt, const Stencil& stencil = {});

// max |J^T G J - G|. Throws FrameMismatch unless both tensors share a frame.
double hermitian_residual(const FrameTensor& acs, const FrameTensor& metric);

// (d Omega)_abc = d_a Omega_bc + d_b Omega_ca + d_c Omega_ab, coordinate frame.
Tensor3 d_omega_numeric(const SpaceForm& sf, const TensorField& omega, const ChartPoint& pt,
                        const Stencil& stencil = {});

// d Omega = (1/2)(lambda' - mu) p_k (g^kh delta^i_j - g^ki delta^h_j) Dp_h ^ Dp_i ^ dq^j,
// converted to the coordinate frame.
Tensor3 d_omega_closed_form(const SpaceForm& sf, const ChartPoint& pt, const CurveJet& lambda, double mu);

// max |nabla J| for the Levi-Civita connection of G, both differentiated numerically.
// Throws StencilOutsideChart, or NotPositiveDefinite if G is not at pt.
double covariant_derivative_J(const SpaceForm& sf, const TensorField& acs, const TensorField& metric,
                              const ChartPoint& pt, const Stencil& stencil = {});

// out(i, j, k) = w(a, b, c) m(a, i) m(b, j) m(c, k)
Tensor3 pull_back(const Tensor3& w, const Matrix& m);

}  // namespace klift
