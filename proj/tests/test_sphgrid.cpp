#include "doctest.h"
#include "test_util.hpp"

#include <nearsphere/sphgrid.hpp>

#include <cmath>

using namespace nsph;

TEST_CASE("make_grid node counts and weights") {
  auto g2 = make_grid(2, 8);
  CHECK(g2->size() == 18);
  for (Eigen::Index i = 0; i < g2->size(); ++i) CHECK(g2->weights()[i] == doctest::Approx(2 * kPi / 18).epsilon(1e-15));

  auto g3 = make_grid(3, 16);
  CHECK(g3->size() >= 17 * 33);
  CHECK(std::abs(g3->weights().sum() - 4 * kPi) < 1e-12 * 4 * kPi);
  CHECK(std::abs(make_grid(3, 128)->weights().sum() - 4 * kPi) < 1e-12 * 4 * kPi);
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(4, 8), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 513), std::invalid_argument);
}

TEST_CASE("closed-form Y_{3,1} is orthonormal under quadrature") {
  // Y_{3,1} = sqrt(21/(32 pi)) * sqrt2/sqrt2 ... written from scratch:
  // real cos-type, no phase: sqrt(2) * sqrt(7/(4pi) * 2!/4!) * P_3^1(x) cos(phi),
  // P_3^1(x) = 1.5 (5x^2 - 1) sqrt(1-x^2).
  auto g = make_grid(3, 16);
  const double N = std::sqrt(2.0) * std::sqrt(7.0 / (4 * kPi) * 2.0 / 24.0);
  Eigen::VectorXd y(g->size());
  for (Eigen::Index i = 0; i < g->size(); ++i) {
    const double x = g->nodes()(i, 2);
    const double s = std::hypot(g->nodes()(i, 0), g->nodes()(i, 1));
    const double cphi = g->nodes()(i, 0) / s;
    y[i] = N * 1.5 * (5 * x * x - 1) * s * cphi;
  }
  CHECK(std::abs(integrate(*g, y.cwiseProduct(y)) - 1.0) < 1e-12);
  // and it is the library's (3,1) basis function
  SpectralCoeffs c = analyze({g, y});
  CHECK(std::abs(c(3, 1) - 1.0) < 1e-12);
  c(3, 1) = 0;
  CHECK(c.a.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("quadrature is exact for harmonic products up to degree 2L") {
  for (int n : {2, 3}) {
    const int L = 10;
    auto g = make_grid(n, L);
    const int K = num_coeffs(n, L);
    Eigen::MatrixXd Y(g->size(), K);
    for (int k = 0; k < K; ++k) {
      SpectralCoeffs e(n, L);
      e.a[k] = 1;
      Y.col(k) = synthesize(e, g).values;
    }
    Eigen::MatrixXd gram = Y.transpose() * g->weights().asDiagonal() * Y;
    CHECK((gram - Eigen::MatrixXd::Identity(K, K)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("basis element and zero round trips") {
  auto g = make_grid(3, 12);
  SpectralCoeffs e(3, 12);
  e(2, 0) = 1.0;
  SpectralCoeffs back = analyze(synthesize(e, g));
  CHECK((back.a - e.a).cwiseAbs().maxCoeff() < 1e-12);
  SphericalField z = synthesize(SpectralCoeffs(3, 12), g);
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random bandlimited round trip at L=32") {
  for (int n : {2, 3}) {
    auto g = make_grid(n, 32);
    testutil::Rng rng(7 + n);
    for (int trial = 0; trial < 3; ++trial) {
      SpectralCoeffs c = testutil::random_coeffs(rng, n, 32, 1.0);
      SphericalField f = synthesize(c, g);
      SpectralCoeffs c2 = analyze(f);
      CHECK((c2.a - c.a).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((synthesize(c2, g).values - f.values).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("Laplace-Beltrami eigenfunctions and div(grad) = laplace") {
  auto g = make_grid(3, 16);
  SpectralCoeffs e(3, 16);
  e(2, 0) = 1.0;
  SpectralCoeffs lap = laplace_tau(e);
  CHECK(lap(2, 0) == doctest::Approx(-6.0));
  for (int n : {2, 3}) {
    auto gg = make_grid(n, 16);
    testutil::Rng rng(3);
    SpectralCoeffs c = testutil::random_coeffs(rng, n, 16, 1.0);
    SpectralCoeffs dg = div_tau(grad_tau(c, gg));
    SpectralCoeffs l = laplace_tau(c);
    CHECK((synthesize(dg, gg).values - synthesize(l, gg).values).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("gradient of constants vanishes and Dirichlet energy of Y_1 is n-1") {
  for (int n : {2, 3}) {
    auto g = make_grid(n, 8);
    TangentField t = grad_tau(SpectralCoeffs::constant(n, 8, 3.0), g);
    CHECK(t.comps.cwiseAbs().maxCoeff() < 1e-13);
    SpectralCoeffs y1(n, 8);
    y1(1, n == 2 ? 1 : 0) = 1.0;
    TangentField gy = grad_tau(y1, g);
    const double energy = integrate(*g, gy.comps.rowwise().squaredNorm());
    CHECK(std::abs(energy - (n - 1)) < 1e-12);
  }
}

TEST_CASE("integration by parts identities") {
  for (int n : {2, 3}) {
    auto g = make_grid(n, 16);
    testutil::Rng rng(11);
    SpectralCoeffs f = testutil::random_coeffs(rng, n, 16, 1.0);
    SpectralCoeffs h = testutil::random_coeffs(rng, n, 16, 1.0);
    // div of an arbitrary (non-gradient) tangent field integrates to zero
    TangentField v{g, Eigen::MatrixXd::Random(g->size(), n - 1)};
    SpectralCoeffs dv = div_tau(v);
    CHECK(std::abs(integrate(synthesize(dv, g))) < 1e-10);
    const double lhs = integrate(*g, synthesize(f, g).values.cwiseProduct(synthesize(laplace_tau(h), g).values));
    TangentField gf = grad_tau(f, g), gh = grad_tau(h, g);
    const double rhs = -integrate(*g, gf.comps.cwiseProduct(gh.comps).rowwise().sum());
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("Hessian trace is the Laplacian and point evaluation matches grid") {
  for (int n : {2, 3}) {
    auto g = make_grid(n, 12);
    testutil::Rng rng(5);
    SpectralCoeffs c = testutil::random_coeffs(rng, n, 12, 1.0);
    HessianField h = hessian_tau(c, g);
    Eigen::VectorXd tr = n == 2 ? Eigen::VectorXd(h.comps.col(0)) : Eigen::VectorXd(h.comps.col(0) + h.comps.col(2));
    CHECK((tr - synthesize(laplace_tau(c), g).values).cwiseAbs().maxCoeff() < 1e-9);
    SphericalField f = synthesize(c, g);
    TangentField gr = grad_tau(c, g);
    for (Eigen::Index i : {Eigen::Index(0), Eigen::Index(17), g->size() - 1}) {
      PointValue pv = evaluate(c, g->nodes().row(i).transpose());
      CHECK(pv.value == doctest::Approx(f.values[i]).epsilon(1e-12));
      Eigen::VectorXd amb = tangent_frame(*g, i) * gr.comps.row(i).transpose();
      CHECK((amb - pv.grad).norm() < 1e-10);
    }
  }
}

TEST_CASE("finite-difference check of the Hessian") {
  auto g = make_grid(3, 10);
  testutil::Rng rng(9);
  SpectralCoeffs c = testutil::random_coeffs(rng, 3, 10, 1.0);
  HessianField H = hessian_tau(c, g);
  const Eigen::Index i = 5 * g->ring_size() + 3;
  Eigen::Vector3d p = g->nodes().row(i).transpose();
  Eigen::MatrixXd E = tangent_frame(*g, i);
  // second derivative along the great circle through p in direction e
  for (int a = 0; a < 2; ++a) {
    Eigen::Vector3d e = E.col(a);
    const double h = 1e-4;
    auto at = [&](double t) { return evaluate(c, std::cos(t) * p + std::sin(t) * e).value; };
    const double d2 = (at(h) - 2 * at(0) + at(-h)) / (h * h);
    CHECK(d2 == doctest::Approx(H.at(i)(a, a)).epsilon(1e-5));
  }
}

TEST_CASE("synthesis matrices match synthesize and grad_tau") {
  testutil::Rng rng(8);
  for (int n : {2, 3}) {
    auto q = oversampled(*make_grid(n, 6));
    auto M = synthesis_matrices(n, 6, q);
    auto c = testutil::random_coeffs(rng, n, 6, 1.0);
    CHECK((M.val * c.a - synthesize(c, q).values).cwiseAbs().maxCoeff() < 1e-13);
    auto g = grad_tau(c, q);
    for (int k = 0; k < n - 1; ++k) CHECK((M.grad[k] * c.a - g.comps.col(k)).cwiseAbs().maxCoeff() < 1e-13);
  }
}
