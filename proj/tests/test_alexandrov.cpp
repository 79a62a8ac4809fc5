#include "doctest.h"
#include "test_util.hpp"

#include "nearsphere/alexandrov.hpp"

#include <cmath>

using namespace nsph;

namespace {

NearlySphericalSet single_mode(int n, int L, int l, int m, double a) {
  SpectralCoeffs u(n, L);
  u(l, m) = a;
  return make_set(u);
}

}  // namespace

TEST_CASE("ball") {
  for (int n : {2, 3}) {
    auto rep = alex_check(make_ball(n, 8));
    CHECK_FALSE(rep.ratio_defined);
    CHECK(rep.mu_star == doctest::Approx(n - 1).epsilon(1e-12));
    CHECK(rep.w12_of_w < 1e-14);
    CHECK(rep.wm12_of_S_minus_mu < 1e-12);
    CHECK(rep.lp_oscillation < 1e-12);
    CHECK(rep.symdiff_to_ball < 1e-14);
    CHECK(rep.radii.inner == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.radii.outer == doctest::Approx(1.0).epsilon(1e-14));
  }
  for (double r : {0.9, 1.1}) {
    auto R = radii(make_ball(3, 6, r));
    CHECK(R.inner == doctest::Approx(r).epsilon(1e-14));
    CHECK(R.outer == doctest::Approx(r).epsilon(1e-14));
  }
}

TEST_CASE("radii of B + 0.05 Y20 match the closed-form extrema") {
  // Y20 = sqrt(5/16pi)(3z^2 - 1): max at the poles, min on the equator
  const double c = std::sqrt(5.0 / (16 * kPi));
  for (int L : {4, 9, 16}) {
    auto R = radii(single_mode(3, L, 2, 0, 0.05));
    CHECK(std::abs(R.outer - (1 + 0.05 * 2 * c)) < 1e-9);
    CHECK(std::abs(R.inner - (1 - 0.05 * c)) < 1e-9);
    CHECK(std::abs((R.outer - R.inner) - 0.05 * 3 * c) < 1e-9);
  }
  // tilted mode: extremum off every grid ring
  SpectralCoeffs u(3, 10);
  u(3, 1) = 0.02;
  u(2, -2) = 0.01;
  auto E = make_set(u);
  auto R = radii(E);
  testutil::Rng rng(8);
  double lo = 10, hi = -10;
  for (int k = 0; k < 200000; ++k) {
    Eigen::Vector3d x(rng.normal(), rng.normal(), rng.normal());
    const double v = 1 + evaluate(u, x.normalized()).value;
    lo = std::min(lo, v), hi = std::max(hi, v);
  }
  CHECK(R.inner <= lo + 1e-14);
  CHECK(R.outer >= hi - 1e-14);
  CHECK(R.outer - hi < 1e-5);
  CHECK(lo - R.inner < 1e-5);
}

TEST_CASE("linearized ratio for single modes") {
  CHECK(linearized_ratio(3, 2) == doctest::Approx(1.75).epsilon(1e-15));
  CHECK_THROWS_AS(linearized_ratio(3, 1), std::invalid_argument);
  for (int l = 2; l <= 5; ++l) {
    const double target = linearized_ratio(3, l);
    const double r3 = alex_check(single_mode(3, 16, l, 0, 1e-3)).ratio;
    const double r2 = alex_check(single_mode(3, 16, l, 0, 1e-2)).ratio;
    const double r4 = alex_check(single_mode(3, 16, l, 0, 1e-4)).ratio;
    CHECK(std::abs(r3 / target - 1) < (l == 2 ? 0.01 : 0.02));
    // first-order convergence in a: the error shrinks about tenfold per decade
    CHECK(std::abs(r4 - target) < std::abs(r3 - target) + 1e-6);
    CHECK(std::abs(r3 - target) < std::abs(r2 - target) + 1e-6);
    // Richardson extrapolation from a = 1e-3, 1e-4
    CHECK(std::abs((10 * r4 - r3) / 9 / target - 1) < 1e-3);
    // halving a keeps the ratio within 5%
    const double rh = alex_check(single_mode(3, 16, l, 0, 5e-4)).ratio;
    CHECK(std::abs(rh / r3 - 1) < 0.05);
  }
  // non-axial modes behave the same way
  CHECK(std::abs(alex_check(single_mode(3, 16, 3, -2, 1e-3)).ratio / linearized_ratio(3, 3) - 1) < 0.02);
  // n = 2: lambda_l = l^2
  for (int l = 2; l <= 4; ++l) {
    const double r = alex_check(single_mode(2, 32, l, l, 1e-4)).ratio;
    CHECK(std::abs(r / linearized_ratio(2, l) - 1) < 0.01);
  }
}

TEST_CASE("first mode degeneracy needs the barycenter") {
  auto T = single_mode(3, 16, 1, 0, 0.01);  // almost a translated ball
  AlexConfig raw;
  raw.recenter = false;
  const auto bad = alex_check(T, raw);
  const auto good = alex_check(T);
  CHECK(good.shift.norm() > 1e-3);
  CHECK(bad.ratio > 10 * good.ratio);
  CHECK(bad.ratio > 50);
  testutil::Rng rng(11);
  double worst = 0;
  for (int k = 0; k < 5; ++k) {
    auto u = testutil::random_coeffs(rng, 3, 12, 1.0, 3.0);
    u.a[0] = 0;
    u = (0.03 / make_set(0.01 * u).sigma_bound * 0.01) * u;
    worst = std::max(worst, alex_check(make_set(u)).ratio);
  }
  CHECK(std::isfinite(worst));
  CHECK(bad.ratio > 10 * worst);
}

TEST_CASE("mean-value and first-mode constants") {
  // volume-normalized small perturbation: int xi ~ -(n/2) int xi^2 while
  // int w ~ -((n-1)/2) int w^2
  SpectralCoeffs u(3, 16);
  u(3, 0) = 1e-3;
  u(4, 2) = 5e-4;
  u.a[0] = volume_fix_constant(u, ball_volume(3)) * std::sqrt(4 * kPi);
  auto E = make_set(u);
  auto rep = alex_check(E);
  CHECK(rep.mean_value_ratio == doctest::Approx(1.5).epsilon(1e-2));
  CHECK(std::abs(u.a[0] * std::sqrt(4 * kPi)) / u.a.squaredNorm() == doctest::Approx(1.0).epsilon(1e-2));
  // barycentering kills the l = 1 part of xi up to O(sigma |xi|)
  CHECK(rep.first_mode_C < 1.0);
  CHECK(rep.w2p_proxy >= rep.w12_of_w);
}

TEST_CASE("W22 proxy against grid quadrature of the Hessian") {
  testutil::Rng rng(5);
  auto w = testutil::random_coeffs(rng, 3, 10, 0.01, 1.0);
  GridPtr q = oversampled(*make_grid(3, 10));
  const auto v = synthesize(w, q).values;
  const auto g = grad_tau(w, q).comps;
  const auto H = hessian_tau(w, q).comps;
  // Frobenius norm with the off-diagonal entry counted twice
  const Eigen::VectorXd hh = H.col(0).array().square() + 2 * H.col(1).array().square() + H.col(2).array().square();
  const double direct = integrate(*q, v.array().square().matrix()) +
                        integrate(*q, g.rowwise().squaredNorm()) + integrate(*q, hh);
  CHECK(w22_norm(w) == doctest::Approx(std::sqrt(direct)).epsilon(1e-11));
}
