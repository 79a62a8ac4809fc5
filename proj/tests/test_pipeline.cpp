#include "doctest.h"
#include "test_util.hpp"

#include "nearsphere/pipeline.hpp"

#include <cmath>

using namespace nsph;

TEST_CASE("heat semigroup") {
  SpectralCoeffs y(3, 8);
  y(2, 0) = 1.0;
  CHECK(heat_smooth(y, 0.1)(2, 0) == doctest::Approx(std::exp(-0.6)).epsilon(1e-15));
  testutil::Rng rng(3);
  auto w = testutil::random_coeffs(rng, 3, 12, 1.0);
  CHECK((heat_smooth(w, 0.0).a - w.a).norm() == 0.0);
  CHECK((heat_smooth(heat_smooth(w, 0.01), 0.02).a - heat_smooth(w, 0.03).a).norm() < 1e-12 * w.a.norm());
  CHECK(heat_smooth(w, 0.05).mean() == doctest::Approx(w.mean()).epsilon(1e-15));
  CHECK_THROWS_AS(heat_smooth(w, -1e-3), std::invalid_argument);
  for (double eps : {1e-4, 1e-2, 0.3}) {
    auto h = heat_smooth(w, eps);
    CHECK(w12_norm(h) <= w12_norm(w));
    CHECK(wm12_norm(h) <= wm12_norm(w));
    CHECK(l2_norm(h) <= l2_norm(w));
    // per-mode multiplier bound 1 - exp(-x) <= sqrt(x), hence
    // |w - heat(w)|_{L2} <= sqrt(eps) |D w|_{L2}
    const Eigen::ArrayXd lam = w.eigenvalues().array();
    CHECK(((1 - (-lam * eps).exp()) <= (lam * eps).sqrt() + 1e-15).all());
    const double dirichlet = std::sqrt((lam * w.a.array().square()).sum());
    CHECK((w - h).a.norm() <= std::sqrt(eps) * dirichlet);
  }
}

TEST_CASE("identity case E = B") {
  PipelineConfig cfg;
  cfg.minimize.L = 12;
  auto B = make_ball(3, 12);
  auto r = construct_F(B, cfg);
  CHECK(r.accepted);
  CHECK(r.convex);
  CHECK(r.F.center.norm() < 1e-12);
  CHECK(sobolev_c_norms(r.F.u).linf < 1e-6);
  CHECK(std::abs(r.report.slack) < 1e-12);
  CHECK(std::abs(r.report.lhs) < 1e-12);
  CHECK(r.flag.empty());
}

TEST_CASE("config validation") {
  PipelineConfig cfg;
  cfg.lambda = 0.2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.lambda = 0.1;
  cfg.sigma = 0.01;
  SpectralCoeffs u(3, 8);
  u(2, 0) = 0.05;
  CHECK_THROWS_AS(construct_F(make_set(u), cfg), std::invalid_argument);
}

TEST_CASE("Y20 perturbation end to end") {
  PipelineConfig cfg;
  cfg.minimize.L = 12;
  SpectralCoeffs u(3, 12);
  u(2, 0) = 0.05;
  u.a[0] = volume_fix_constant(u, ball_volume(3)) * std::sqrt(4 * kPi);
  auto E = make_set(u);
  cfg.sigma = std::min(kSigmaBar, E.sigma_bound * 1.0000001);
  auto r = construct_F(E, cfg);
  INFO(r.flag);
  CHECK(r.accepted);
  CHECK(r.convex);
  CHECK(r.report.slack >= -1e-8);
  CHECK(r.report.volume_F == doctest::Approx(r.report.volume_E).epsilon(1e-10));
  CHECK(r.epsilon == std::pow(r.symdiff_EH, 6));
  CHECK(r.report.lhs > 0);
}

TEST_CASE("translation equivariance") {
  PipelineConfig cfg;
  cfg.minimize.L = 10;
  testutil::Rng rng(31);
  auto u = testutil::random_coeffs(rng, 3, 10, 0.005, 2.0);
  u.a[0] = 0;
  u.a[0] = volume_fix_constant(u, ball_volume(3)) * std::sqrt(4 * kPi);
  auto E = make_set(u);
  REQUIRE(E.sigma_bound <= cfg.sigma);
  Eigen::VectorXd z(3);
  z << -0.2, 0.4, 0.1;
  auto r0 = construct_F(E, cfg);
  auto r1 = construct_F(translate(E, z), cfg);
  CHECK((r1.F.center - r0.F.center - z).norm() < 1e-6);
  CHECK((r1.F.u.a - r0.F.u.a).norm() < 1e-6);
  CHECK(r1.report.slack == doctest::Approx(r0.report.slack).epsilon(1e-6));
}
