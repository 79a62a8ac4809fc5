#pragma once

#include <nearsphere/sphgrid.hpp>

#include <cmath>
#include <cstdint>
#include <random>

// Test-side helpers kept independent of the library's corpus generator.
namespace testutil {

inline constexpr double kPiTest = 3.14159265358979323846;

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double a = 0.0, double b = 1.0) { return std::uniform_real_distribution<double>(a, b)(eng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
};

inline nsph::SpectralCoeffs random_coeffs(Rng& rng, int n, int L, double scale, double decay = 0.0) {
  nsph::SpectralCoeffs c(n, L);
  for (Eigen::Index i = 0; i < c.a.size(); ++i) {
    const int l = nsph::coeff_degree(n, int(i));
    c.a[i] = scale * rng.normal() * (decay > 0 ? std::pow(double(std::max(l, 1)), -decay) : 1.0);
  }
  return c;
}

}  // namespace testutil
