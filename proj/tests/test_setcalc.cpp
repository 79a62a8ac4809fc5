#include "doctest.h"
#include "test_util.hpp"

#include "nearsphere/setcalc.hpp"
#include "nearsphere/symdiff.hpp"

#include <cmath>
#include <functional>

using namespace nsph;

namespace {

// Axisymmetric oracles (n = 3): the body is a solid of revolution about the
// z-axis with meridian (r(t) sin t, r(t) cos t), t in [0, pi]. Integrals are
// taken as slices/shells with a fine composite Simpson rule in t.
double simpson(const std::function<double(double)>& f, double a, double b, int N) {
  const double h = (b - a) / N;
  double s = f(a) + f(b);
  for (int i = 1; i < N; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

struct Meridian {
  std::function<double(double)> r, dr;
};

Meridian y20_meridian(double eps) {
  const double c = eps * std::sqrt(5.0 / (16 * kPi));
  return {[=](double t) { return 1 + c * (3 * std::cos(t) * std::cos(t) - 1); },
          [=](double t) { return -6 * c * std::cos(t) * std::sin(t); }};
}

// pi int x^2 dz along the meridian; z decreases with t.
double slice_volume(const Meridian& m) {
  return simpson(
      [&](double t) {
        const double x = m.r(t) * std::sin(t);
        const double dz = m.dr(t) * std::cos(t) - m.r(t) * std::sin(t);
        return -kPi * x * x * dz;
      },
      0, kPi, 20000);
}

double slice_zmoment(const Meridian& m) {
  return simpson(
      [&](double t) {
        const double x = m.r(t) * std::sin(t), z = m.r(t) * std::cos(t);
        const double dz = m.dr(t) * std::cos(t) - m.r(t) * std::sin(t);
        return -kPi * x * x * z * dz;
      },
      0, kPi, 20000);
}

double revolution_area(const Meridian& m) {
  return simpson(
      [&](double t) {
        const double x = m.r(t) * std::sin(t);
        return 2 * kPi * x * std::hypot(m.r(t), m.dr(t));
      },
      0, kPi, 20000);
}

SpectralCoeffs y20(int L, double eps) {
  SpectralCoeffs u(3, L);
  u(2, 0) = eps;
  return u;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(v.size());
  int i = 0;
  for (double d : v) x[i++] = d;
  return x;
}

}  // namespace

TEST_CASE("ball values") {
  for (int n : {2, 3}) {
    auto B = make_ball(n, 8, 0.9);
    CHECK(volume(B) == doctest::Approx(ball_volume(n) * std::pow(0.9, n)).epsilon(1e-13));
    CHECK(perimeter(B) == doctest::Approx(sphere_area(n) * std::pow(0.9, n - 1)).epsilon(1e-13));
    CHECK(barycenter(B).norm() < 1e-14);
    auto cf = mean_curvature(B);
    CHECK((cf.S_nodal.values.array() - (n - 1) / 0.9).abs().maxCoeff() < 1e-12);
    CHECK(!cf.low_confidence);
    CHECK(convexity_margin(B) == doctest::Approx(1 / 0.9).epsilon(1e-12));
  }
  CHECK(ball_volume(3) == doctest::Approx(4 * kPi / 3));
  CHECK(sphere_area(2) == doctest::Approx(2 * kPi));
}

TEST_CASE("make_set preconditions") {
  SpectralCoeffs u(3, 8);
  u(0, 0) = 0.6 * std::sqrt(4 * kPi);
  CHECK_THROWS_AS(make_set(u), std::invalid_argument);
  u(0, 0) = 0.1;
  CHECK_THROWS_AS(make_set(u, vec({0, 0})), std::invalid_argument);
  auto E = make_set(y20(8, 0.2));
  CHECK(E.sigma_bound > 0.0);
  CHECK(E.sigma_bound < 0.5);
}

TEST_CASE("slice oracles for an axisymmetric body") {
  const double eps = 0.25;
  auto m = y20_meridian(eps);
  auto E = make_set(y20(16, eps));
  CHECK(volume(E) == doctest::Approx(slice_volume(m)).epsilon(1e-10));
  CHECK(perimeter(E) == doctest::Approx(revolution_area(m)).epsilon(1e-4));

  // odd mode shifts the barycenter along z
  SpectralCoeffs v = y20(16, eps);
  v(1, 0) = 0.1;
  v(3, 0) = -0.05;
  auto F = make_set(v);
  const double c1 = 0.1 * std::sqrt(3 / (4 * kPi)), c3 = -0.05 * std::sqrt(7 / (16 * kPi));
  const double c2 = eps * std::sqrt(5.0 / (16 * kPi));
  Meridian mf{[=](double t) {
                const double x = std::cos(t);
                return 1 + c1 * x + c2 * (3 * x * x - 1) + c3 * (5 * x * x * x - 3 * x);
              },
              [=](double t) {
                const double x = std::cos(t), dx = -std::sin(t);
                return (c1 + 6 * c2 * x + c3 * (15 * x * x - 3)) * dx;
              }};
  const double V = slice_volume(mf);
  CHECK(volume(F) == doctest::Approx(V).epsilon(1e-10));
  const Eigen::VectorXd bc = barycenter(F);
  CHECK(bc[2] == doctest::Approx(slice_zmoment(mf) / V).epsilon(1e-8));
  CHECK(std::abs(bc[0]) < 1e-13);
  CHECK(std::abs(bc[1]) < 1e-13);
  CHECK(perimeter(F) == doctest::Approx(revolution_area(mf)).epsilon(1e-4));

  // symmetric difference of two coaxial bodies: slice in t with the exact
  // kink of |rA^3 - rB^3| resolved by many panels
  auto G = make_set(y20(16, -0.15));
  auto mg = y20_meridian(-0.15);
  const double sd_oracle = simpson(
      [&](double t) {
        return 2 * kPi * std::abs(std::pow(mf.r(t), 3) - std::pow(mg.r(t), 3)) / 3 * std::sin(t);
      },
      0, kPi, 400000);
  CHECK(symdiff(F, G) == doctest::Approx(sd_oracle).epsilon(1e-4));
}

TEST_CASE("planar polar oracles") {
  // polygon approximations with 200k vertices
  SpectralCoeffs u(2, 12);
  u(2, 2) = 0.15;   // cos 2phi
  u(3, -3) = 0.08;  // sin 3phi
  auto E = make_set(u);
  auto rad = [&](double p) {
    return 1 + 0.15 * std::cos(2 * p) / std::sqrt(kPi) + 0.08 * std::sin(3 * p) / std::sqrt(kPi);
  };
  const int N = 200000;
  double area = 0, len = 0, mx = 0, my = 0;
  for (int k = 0; k < N; ++k) {
    const double p0 = 2 * kPi * k / N, p1 = 2 * kPi * (k + 1) / N;
    const double x0 = rad(p0) * std::cos(p0), y0 = rad(p0) * std::sin(p0);
    const double x1 = rad(p1) * std::cos(p1), y1 = rad(p1) * std::sin(p1);
    const double cr = x0 * y1 - x1 * y0;
    area += cr / 2;
    mx += (x0 + x1) * cr / 6;
    my += (y0 + y1) * cr / 6;
    len += std::hypot(x1 - x0, y1 - y0);
  }
  CHECK(volume(E) == doctest::Approx(area).epsilon(1e-8));
  CHECK(perimeter(E) == doctest::Approx(len).epsilon(1e-8));
  const Eigen::VectorXd bc = barycenter(E);
  CHECK(bc[0] == doctest::Approx(mx / area).epsilon(1e-6));
  CHECK(bc[1] == doctest::Approx(my / area).epsilon(1e-6));

  // total curvature of a closed convex curve
  auto cf = mean_curvature(E);
  auto q = cf.S_nodal.grid;
  const Eigen::ArrayXd r = synthesize(E.u, q).values.array() + 1;
  const Eigen::ArrayXd dr = grad_tau(E.u, q).comps.col(0).array();
  CHECK(integrate(*q, (cf.S_nodal.values.array() * (r * r + dr * dr).sqrt()).matrix()) ==
        doctest::Approx(2 * kPi).epsilon(1e-7));
}

TEST_CASE("scaling laws") {
  testutil::Rng rng(7);
  for (int n : {2, 3}) {
    auto u = testutil::random_coeffs(rng, n, 12, 0.05, 2.0);
    auto E = make_set(u);
    auto R = rescale_volume(E, 1.7 * volume(E));
    CHECK(volume(R.set) == doctest::Approx(1.7 * volume(E)).epsilon(1e-12));
    CHECK(R.rho == doctest::Approx(std::pow(1.7, 1.0 / n)).epsilon(1e-14));
    CHECK(perimeter(R.set) == doctest::Approx(std::pow(R.rho, n - 1) * perimeter(E)).epsilon(1e-12));
    const Eigen::VectorXd b0 = barycenter(E), b1 = barycenter(R.set);
    CHECK((b1 - R.rho * b0).norm() < 1e-12);
  }
}

TEST_CASE("weak curvature agrees with fundamental forms") {
  testutil::Rng rng(3);
  for (int n : {2, 3}) {
    auto u = testutil::random_coeffs(rng, n, 8, 0.05, 3.0).resized(24);
    auto E = make_set(u);
    auto cf = mean_curvature(E);
    CHECK(!cf.low_confidence);
    const Eigen::VectorXd H = pointwise_mean_curvature(E);
    CHECK((cf.S_nodal.values - H).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("linearized mean curvature of a small Y20 perturbation") {
  const double eps = 1e-4;
  auto E = make_set(y20(8, eps));
  auto cf = mean_curvature(E);
  SpectralCoeffs lin = SpectralCoeffs::constant(3, 8, 2.0);
  lin(2, 0) = 4 * eps;
  CHECK((cf.S.a - lin.a).norm() < 10 * eps * eps);
}

TEST_CASE("low confidence flag on a rough field") {
  SpectralCoeffs u(3, 16);
  u(16, 3) = 0.01;
  auto cf = mean_curvature(make_set(u));
  CHECK(cf.low_confidence);
  CHECK(cf.xi_tail > 0.5);
}

TEST_CASE("regraph and recenter") {
  testutil::Rng rng(11);
  for (int n : {2, 3}) {
    // smooth field on a wider band so the regraphed set is resolved
    auto u = testutil::random_coeffs(rng, n, 4, 0.04, 2.0).resized(32);
    auto E = make_set(u);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    z[0] = 0.05;
    z[n - 1] = -0.03;
    auto F = recenter(E, z);
    CHECK(F.center.norm() < 1e-15);
    // the translated set has the same volume and its barycenter moves by -z
    CHECK(volume(F) == doctest::Approx(volume(E)).epsilon(1e-6));
    CHECK((barycenter(F) - (barycenter(E) - z)).norm() < 1e-6);
    // round trip
    auto G = recenter(F, -z);
    CHECK((G.u.a - E.u.a).norm() < 1e-6);
    // the same set graphed about two points has zero symmetric difference
    CHECK(symdiff(E, translate(F, z)) < 1e-6);
  }
  auto B = make_ball(3, 8);
  CHECK_THROWS_AS(regraph(B, vec({2, 0, 0})), std::invalid_argument);
}

TEST_CASE("barycentering is a fixed point") {
  testutil::Rng rng(5);
  auto E = make_set(testutil::random_coeffs(rng, 3, 4, 0.05, 2.0).resized(32));
  auto F = recenter(E, barycenter(E));
  CHECK(barycenter(F).norm() < 1e-7);
  auto G = recenter(F, barycenter(F));
  CHECK((G.u.a - F.u.a).norm() < 1e-6);
}

TEST_CASE("symmetric difference of nested and identical sets") {
  testutil::Rng rng(21);
  for (int n : {2, 3}) {
    const int L = 8;
    auto u = testutil::random_coeffs(rng, n, L, 0.05, 1.0);
    auto A = make_set(u);
    CHECK(symdiff(A, A) == 0.0);
    auto v = u;
    v.a[0] += 0.3;
    auto Bg = make_set(v);
    CHECK(symdiff(Bg, A) == doctest::Approx(volume(Bg) - volume(A)).epsilon(1e-12));
    CHECK(symdiff(A, Bg) == doctest::Approx(symdiff(Bg, A)).epsilon(1e-14));
  }
  // nested balls
  CHECK(symdiff(make_ball(3, 8), make_ball(3, 8, 1.1)) == doctest::Approx((1.331 - 1) * 4 * kPi / 3).epsilon(1e-12));
}

TEST_CASE("sobolev norms and iso check") {
  SpectralCoeffs u(2, 8);
  u(3, 3) = std::sqrt(kPi) * 0.01;  // 0.01 cos 3phi
  auto c = sobolev_c_norms(u);
  CHECK(c.linf == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(c.w1inf == doctest::Approx(0.03).epsilon(1e-2));  // discrete sup
  CHECK(c.w1inf <= 0.03);
  CHECK(c.c2 == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(c.c2_norm() == doctest::Approx(0.09));

  auto ic = isoperimetric_check(make_ball(3, 8, 1.1));
  CHECK(std::abs(ic.deficit) < 1e-12);
  CHECK(ic.asymmetry < 1e-12);
  auto ie = isoperimetric_check(make_set(y20(8, 0.1)));
  CHECK(ie.deficit > 0);
  CHECK(ie.asymmetry > 0);

  testutil::Rng rng(2);
  auto v = testutil::random_coeffs(rng, 3, 10, 0.05, 2.0);
  const double cc = volume_fix_constant(v, ball_volume(3));
  v.a[0] += cc * std::sqrt(4 * kPi);
  CHECK(volume(make_set(v)) == doctest::Approx(ball_volume(3)).epsilon(1e-14));
}

TEST_CASE("small Y20 perturbation against the ball") {
  auto E = make_set(y20(8, 0.05));
  auto B = make_ball(3, 8);
  auto m = y20_meridian(0.05);
  const double oracle = simpson(
      [&](double t) { return 2 * kPi * std::abs(std::pow(m.r(t), 3) - 1) / 3 * std::sin(t); }, 0, kPi, 400000);
  CHECK(std::abs(symdiff(E, B) - oracle) < 1e-8);
}
