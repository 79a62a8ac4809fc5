#pragma once

#include "nearsphere/sphgrid.hpp"

namespace nsph {

/// (1/n) int |rA^n - rB^n| dH^{n-1} for two radius fields about a common
/// center. Each latitude ring is integrated exactly in longitude: the zero
/// crossings of rA^n - rB^n are root-found on the exact trigonometric series
/// and the integrand is integrated piecewise in closed form. Latitudes use
/// globally adaptive Gauss-Kronrod until the estimated error is below
/// rel_tol times the value (or 1e-15).
double symdiff_measure(const SpectralCoeffs& rA, const SpectralCoeffs& rB, double rel_tol = 1e-10);

}  // namespace nsph
