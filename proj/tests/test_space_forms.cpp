#include "support.hpp"

#include "klift/space_form.hpp"

#include <cmath>

using namespace ktest;

namespace {

// Christoffel symbols from central differences of the metric alone.
Tensor3 christoffel_oracle(const SpaceForm& sf, const Vector& x, double h = 1e-5) {
  const int n = sf.dim();
  std::vector<Matrix> dg(static_cast<std::size_t>(n));
  for (int l = 0; l < n; ++l) {
    Vector xp = x, xm = x;
    xp(l) += h;
    xm(l) -= h;
    dg[static_cast<std::size_t>(l)] = (sf.metric(xp) - sf.metric(xm)) / (2 * h);
  }
  const Matrix gi = sf.metric(x).inverse();
  Tensor3 gamma(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma(k, i, j) = 0.5 * s;
      }
  return gamma;
}

// R^h_kij from central differences of the analytic Christoffel symbols.
Tensor4 curvature_oracle(const SpaceForm& sf, const Vector& x, double h = 1e-5) {
  const int n = sf.dim();
  const Tensor3 g = sf.christoffel(x);
  std::vector<Tensor3> dg;
  for (int l = 0; l < n; ++l) {
    Vector xp = x, xm = x;
    xp(l) += h;
    xm(l) -= h;
    dg.push_back(sf.christoffel(xp) - sf.christoffel(xm));
  }
  Tensor4 r(n);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double v = (dg[i](a, j, k) - dg[j](a, i, k)) / (2 * h);
          for (int m = 0; m < n; ++m) v += g(a, i, m) * g(m, j, k) - g(a, j, m) * g(m, i, k);
          r(a, k, i, j) = v;
        }
  return r;
}

}  // namespace

TEST_CASE("construction and chart") {
  CHECK(code_of([] { SpaceForm(2, 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { SpaceForm(3, NAN); }) == ErrorCode::InvalidArgument);
  CHECK(std::isinf(SpaceForm(3, 1.0).chart_radius()));
  CHECK(std::isinf(SpaceForm(3, 0.0).chart_radius()));
  CHECK(SpaceForm(3, -1.0).chart_radius() == doctest::Approx(2.0));
  CHECK(SpaceForm(3, -4.0).chart_radius() == doctest::Approx(1.0));
  CHECK(SpaceForm(3, 0.0, 1.5).chart_radius() == 1.5);
  CHECK(code_of([] { SpaceForm(3, -1.0, 3.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { SpaceForm(3, -1.0, 0.0); }) == ErrorCode::InvalidArgument);

  SpaceForm hyp(3, -1.0);
  CHECK(hyp.admissible(vec({1.9, 0, 0})));
  CHECK_FALSE(hyp.admissible(vec({2.0, 0, 0})));
  CHECK_FALSE(hyp.admissible(vec({0, 0})));
  CHECK(code_of([&] { hyp.metric(vec({0, 2.5, 0})); }) == ErrorCode::OutsideChart);
  CHECK(code_of([&] { hyp.christoffel(vec({NAN, 0, 0})); }) == ErrorCode::OutsideChart);
  CHECK(hyp.default_sampling_radius() == doctest::Approx(0.5));
  CHECK(SpaceForm(3, -100.0).default_sampling_radius() == doctest::Approx(0.18));
}

TEST_CASE("metric examples") {
  CHECK(max_abs(SpaceForm(4, 0.0).metric(vec({0.3, -1, 2, 5})) - Matrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs(SpaceForm(3, 1.0).metric(vec({0, 0, 0})) - Matrix::Identity(3, 3)) == 0.0);
  const Matrix g = SpaceForm(3, 1.0).metric(vec({1, 0, 0}));
  CHECK(max_abs(g - 0.64 * Matrix::Identity(3, 3)) <= 1e-15);
  SpaceForm sf(5, -0.7);
  const Vector x = vec({0.2, -0.1, 0.4, 0.0, 0.3});
  CHECK(max_abs(sf.metric(x) * sf.inverse_metric(x) - Matrix::Identity(5, 5)) <= 1e-14);
}

TEST_CASE("christoffel symbols") {
  CHECK(SpaceForm(3, 0.0).christoffel(vec({0.5, 0.1, -0.3})).max_abs() == 0.0);
  CHECK(SpaceForm(3, 1.0).christoffel(vec({0, 0, 0})).max_abs() == 0.0);
  {
    SpaceForm sf(3, 1.0);
    const Vector x = vec({0.2, 0, 0});
    CHECK((sf.christoffel(x) - christoffel_oracle(sf, x)).max_abs() <= 1e-7);
  }
  std::mt19937 rng(5);
  for (double c : {-1.0, 0.5, 1.0, 2.0}) {
    for (int n : {3, 4}) {
      SpaceForm sf(n, c);
      for (int k = 0; k < 10; ++k) {
        const Vector x = random_in_ball(rng, n, 0.5);
        const Tensor3 g = sf.christoffel(x);
        CHECK((g - christoffel_oracle(sf, x)).max_abs() <= 1e-7);
        for (int a = 0; a < n; ++a)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(g(a, i, j) == g(a, j, i));
      }
    }
  }
}

TEST_CASE("christoffel derivative matches differences") {
  SpaceForm sf(3, -1.0);
  std::mt19937 rng(9);
  const double h = 1e-5;
  for (int k = 0; k < 10; ++k) {
    const Vector x = random_in_ball(rng, 3, 0.8);
    const Tensor4 d = sf.christoffel_derivative(x);
    for (int l = 0; l < 3; ++l) {
      Vector xp = x, xm = x;
      xp(l) += h;
      xm(l) -= h;
      const Tensor3 fd = sf.christoffel(xp) - sf.christoffel(xm);
      double err = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) err = std::max(err, std::abs(d(l, a, i, j) - fd(a, i, j) / (2 * h)));
      CHECK(err <= 1e-7);
    }
  }
}

TEST_CASE("curvature is the constant curvature model") {
  CHECK(SpaceForm(3, 0.0).curvature(vec({0.1, 0.2, 0.3})).max_abs() == 0.0);
  {
    SpaceForm sf(3, 1.0);
    const Tensor4 r = sf.curvature(vec({0, 0, 0}));
    for (int h = 0; h < 3; ++h)
      for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            CHECK(r(h, k, i, j) == doctest::Approx(double(h == i && k == j) - double(h == j && k == i)));
  }
  {
    SpaceForm sf(3, -1.0);
    const Vector x = vec({0.1, 0.1, 0});
    CHECK((sf.curvature(x) - sf.constant_curvature_model(x)).max_abs() <= 1e-9);
  }
  std::mt19937 rng(3);
  for (double c : {-1.0, 0.0, 1.0, 3.0}) {
    SpaceForm sf(4, c);
    for (int k = 0; k < 15; ++k) {
      const Vector x = random_in_ball(rng, 4, std::min(0.5, 0.9 * sf.chart_radius()));
      CHECK((sf.curvature(x) - sf.constant_curvature_model(x)).max_abs() <= 1e-9);
      CHECK((sf.curvature(x) - curvature_oracle(sf, x)).max_abs() <= 1e-7);
    }
  }
}

TEST_CASE("energy density") {
  SpaceForm flat(3, 0.0), sphere(3, 1.0);
  CHECK(flat.energy_density(vec({0.3, 0.1, 0}), vec({0, 0, 0})) == 0.0);
  CHECK(flat.energy_density(vec({0, 0, 0}), vec({1, 0, 0})) == 0.5);
  CHECK(sphere.energy_density(vec({1, 0, 0}), vec({1, 0, 0})) == doctest::Approx(0.78125).epsilon(1e-14));
  CHECK(code_of([&] { sphere.energy_density(vec({1, 0, 0}), vec({1, 0})); }) == ErrorCode::InvalidArgument);
  std::mt19937 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Vector x = random_in_ball(rng, 3, 1.0), p = random_in_ball(rng, 3, 2.0);
    CHECK(sphere.energy_density(x, p) == doctest::Approx(0.5 * p.dot(sphere.inverse_metric(x) * p)));
    CHECK(sphere.energy_density(x, p) >= 0.0);
  }
}

TEST_CASE("base point bundles the pointwise data") {
  SpaceForm sf(3, 1.0);
  const Vector x = vec({0.1, -0.2, 0.3});
  const BasePointData b = sf.base_point(x);
  CHECK(b.x == x);
  CHECK(max_abs(b.g - sf.metric(x)) == 0.0);
  CHECK(max_abs(b.g_inv - sf.inverse_metric(x)) == 0.0);
  CHECK((b.gamma - sf.christoffel(x)).max_abs() == 0.0);
}
