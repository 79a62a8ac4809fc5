#pragma once

// Quantitative Alexandrov checks: how far the mean curvature of a nearly
// spherical set is from a constant, against how far the set is from a ball.

#include "nearsphere/funcnorms.hpp"

namespace nsph {

struct AlexConfig {
  bool recenter = true;  // move the barycenter to the origin first
  double p = 4.0;        // exponent of the L^p oscillation of S
};

struct Radii {
  double inner = 1.0, outer = 1.0;
};

struct AlexReport {
  double w12_of_w = 0.0;
  double mu_star = 0.0;  // minimizer of |S - mu|_{W-12}, i.e. the mean of S
  double mu_gap = 0.0;   // |mu_star - (n-1)|
  double wm12_of_S_minus_mu = 0.0;
  double lhs = 0.0, rhs = 0.0;
  double ratio = 0.0;          // lhs / rhs, 0 when rhs <= 1e-14
  bool ratio_defined = false;
  double symdiff_to_ball = 0.0;
  Radii radii;
  double p = 4.0;
  double lp_oscillation = 0.0;  // inf_mu |S - mu|_{L^p(dH)}
  double w2p_proxy = 0.0;       // |w|_{W22}, spectral
  double sigma = 0.0;           // sigma_bound of the analysed set
  double first_mode_C = 0.0;    // max_m |xi_{1m}| / (sigma |xi|_{L2})
  double mean_value_ratio = 0.0;  // |int xi| / int xi^2
  double mean_value_C = 0.0;      // (mean_value_ratio - (n-1)/2) / sigma
  Eigen::VectorXd shift;          // barycenter that was removed
  bool low_confidence = false;    // curvature under-resolved at this band
};

AlexReport alex_check(const NearlySphericalSet& H, const AlexConfig& cfg = {});

/// Inner and outer radii about the center: the extrema of 1 + u on the
/// sphere, located on the oversampled grid and polished by geodesic ascent.
Radii radii(const NearlySphericalSet& H);

/// |w|_{W22}^2 = sum a^2 (1 + lambda + lambda^2 - (n-2) lambda), from the
/// Bochner identity on the sphere.
double w22_norm(const SpectralCoeffs& w);

/// Linearized ratio (1 + lambda_l)/(lambda_l - (n-1)) for a single mode l >= 2.
double linearized_ratio(int n, int l);

}  // namespace nsph
