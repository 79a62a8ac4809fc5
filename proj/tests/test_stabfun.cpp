#include "doctest.h"
#include "test_util.hpp"

#include "nearsphere/stabfun.hpp"

#include <cmath>
#include <stdexcept>

using namespace nsph;

TEST_CASE("profile values") {
  const double e1 = std::exp(-1.0);
  CHECK(profile_f(0.5) == doctest::Approx(e1).epsilon(1e-15));
  CHECK(profile_f(e1) == doctest::Approx(0.367879441171442).epsilon(1e-14));
  CHECK(profile_f(0.1) == doctest::Approx(0.0434294481903252).epsilon(1e-14));
  CHECK(profile_f_prime(0.1) == doctest::Approx(0.6229060).epsilon(1e-6));
  CHECK(profile_f(0.0) == 0.0);
  CHECK(profile_f_prime(0.5) == 0.0);
  CHECK(profile_f_prime(e1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(profile_f(0.2, Profile::Linear) == 0.2);
  CHECK(profile_f_prime(0.2, Profile::Linear) == 1.0);
  CHECK_THROWS_AS(profile_f(-1e-3), std::domain_error);
  CHECK(profile_kink<double>() == doctest::Approx(e1));
}

TEST_CASE("derivative against finite differences") {
  for (double t : {1e-3, 0.01, 0.05, 0.2, 0.3}) {
    const double h = 1e-7 * t;
    const double fd = (profile_f(t + h) - profile_f(t - h)) / (2 * h);
    CHECK(profile_f_prime(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("structural properties") {
  testutil::Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double s = rng.uniform(), t = rng.uniform();
    REQUIRE(std::abs(profile_f(t) - profile_f(s)) <= 2 * std::abs(t - s) + 1e-15);
    REQUIRE(profile_f(std::max(s, t)) >= profile_f(std::min(s, t)));
    REQUIRE(profile_f(t) >= t * t / std::exp(1.0) - 1e-15);
    const double a = rng.uniform(0, std::exp(-1.0)), b = rng.uniform(0, std::exp(-1.0));
    REQUIRE(profile_f(0.5 * (a + b)) <= 0.5 * (profile_f(a) + profile_f(b)) + 1e-14);
    const double c = rng.uniform(1e-12, 0.2);
    REQUIRE(profile_f(c / 2) >= profile_f(c) / 4);
  }
}

TEST_CASE("quadratic lower bound constant") {
  // c = 1/e is sharp at t = 1; c = 1 fails beyond t = exp(-1/2)
  CHECK(profile_f(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(profile_f(0.7) < 0.7 * 0.7);
  CHECK(profile_f(0.6) >= 0.6 * 0.6);
}

TEST_CASE("long double instantiation") {
  const long double t = 0.1L;
  CHECK(double(profile_f(t)) == doctest::Approx(0.0434294481903252));
}

TEST_CASE("second derivative against finite differences") {
  for (double t : {1e-3, 0.01, 0.05, 0.2, 0.3}) {
    const double h = 1e-6 * t;
    const double fd = (profile_f_prime(t + h) - profile_f_prime(t - h)) / (2 * h);
    CHECK(profile_f_second(t) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(profile_f_second(t) > 0);
  }
  CHECK(profile_f_second(0.5) == 0.0);
}
