#include "doctest.h"
#include "test_util.hpp"

#include "nearsphere/varmin.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace nsph;

namespace {

SpectralCoeffs mode(int n, int L, int l, int m, double a) {
  SpectralCoeffs u(n, L);
  u(l, m) = a;
  return u;
}

double sup_radius_gap(const NearlySphericalSet& A, const NearlySphericalSet& B) {
  const int L = std::max(A.band(), B.band());
  auto q = oversampled(*make_grid(A.dim(), L));
  return (synthesize(A.u.resized(L), q).values - synthesize(B.u.resized(L), q).values).cwiseAbs().maxCoeff();
}

bool energy_monotone_per_stage(const MinimizeResult& r) {
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    if (r.trace[i].delta == r.trace[i - 1].delta && r.trace[i].energy > r.trace[i - 1].energy + 1e-12) return false;
  return true;
}

}  // namespace

TEST_CASE("config validation") {
  MinimizeConfig c;
  c.mollifier_delta = 1e-3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.mollifier_delta = 1e-8;
  c.lambda = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("the ball is its own minimizer") {
  for (int n : {2, 3}) {
    MinimizeConfig cfg;
    cfg.L = 8;
    auto B = make_ball(n, 8);
    auto r = minimize(B, cfg);
    CHECK(r.converged);
    CHECK(sup_radius_gap(r.H, B) < 1e-6);
    CHECK(r.energy == doctest::Approx(n * ball_volume(n)).epsilon(1e-10));
    CHECK(r.mu_hat == doctest::Approx(n - 1).epsilon(1e-8));
  }
}

TEST_CASE("vanishing penalty recovers the ball") {
  MinimizeConfig cfg;
  cfg.L = 12;
  cfg.lambda = 1e-6;
  auto E = make_set(mode(3, 12, 2, 0, 0.05));
  auto r = minimize(E, cfg);
  CHECK(r.converged);
  CHECK(sup_radius_gap(r.H, make_ball(3, 12)) < 1e-3);
}

TEST_CASE("penalized minimizer at lambda = 0.1") {
  for (int n : {2, 3}) {
    MinimizeConfig cfg;
    cfg.L = n == 3 ? 12 : 32;
    auto E = make_set(mode(n, cfg.L, 2, n == 3 ? 0 : 2, 0.05));
    auto r = minimize(E, cfg);
    INFO("n = " << n << " diag: " << r.diagnostic);
    CHECK(r.converged);
    CHECK(r.el_residual <= 1e-4);
    CHECK(r.energy < perimeter(E));
    CHECK(volume(r.H) == doctest::Approx(ball_volume(n)).epsilon(1e-10));
    CHECK(energy_monotone_per_stage(r));
    // named competitors
    auto B = make_ball(n, cfg.L);
    CHECK(r.energy <= penalized_energy(B, E, cfg.lambda) + 1e-9);
    CHECK(r.energy <= penalized_energy(E, E, cfg.lambda) + 1e-9);
    auto blend = 0.99 * E.u;
    blend.a[0] += volume_fix_constant(blend, ball_volume(n)) * std::sqrt(sphere_area(n));
    CHECK(r.energy <= penalized_energy(make_set(blend), E, cfg.lambda) + 1e-9);
    // H lies between E and B
    CHECK(r.symdiff > 0);
    CHECK(r.symdiff < symdiff(E, B));
  }
}

TEST_CASE("Euler-Lagrange residual on balls") {
  for (int n : {2, 3}) {
    auto B = make_ball(n, 8);
    auto e = el_residual(B, B, 0.1);
    CHECK(e.galerkin < 1e-12);
    CHECK(e.mu_hat == doctest::Approx(n - 1).epsilon(1e-10));
    auto rB = make_ball(n, 8, 1.1);
    auto e2 = el_residual(rB, B, 0.0);
    CHECK(e2.galerkin < 1e-12);
    CHECK(e2.pointwise < 1e-10);
    CHECK(e2.mu_hat == doctest::Approx((n - 1) / 1.1).epsilon(1e-12));
  }
}

TEST_CASE("translation equivariance") {
  MinimizeConfig cfg;
  cfg.L = 10;
  testutil::Rng rng(12);
  auto u = testutil::random_coeffs(rng, 3, 10, 0.02, 2.0);
  u.a[0] = 0;
  u.a[0] = volume_fix_constant(u, ball_volume(3)) * std::sqrt(4 * kPi);
  auto E = make_set(u);
  Eigen::VectorXd z(3);
  z << 0.3, -0.1, 0.2;
  auto r0 = minimize(E, cfg);
  auto r1 = minimize(translate(E, z), cfg);
  CHECK((r1.H.center - r0.H.center - z).norm() < 1e-14);
  CHECK((r1.H.u.a - r0.H.u.a).norm() < 1e-12);
  CHECK(r0.converged);
}

TEST_CASE("trace csv") {
  MinimizeConfig cfg;
  cfg.L = 8;
  auto r = minimize(make_set(mode(3, 8, 3, 1, 0.03)), cfg);
  const std::string path = "varmin_trace_test.csv";
  write_trace_csv(r.trace, path);
  std::ifstream is(path);
  std::string header;
  std::getline(is, header);
  CHECK(header == "iter,energy,perimeter_term,penalty_term,step,residual,delta");
  int rows = 0;
  for (std::string line; std::getline(is, line);) ++rows;
  CHECK(rows == int(r.trace.size()));
  std::remove(path.c_str());
}
