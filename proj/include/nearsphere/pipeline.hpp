#pragma once

// Construction of the convex comparison set F from E: minimize the penalized
// problem, move the minimizer's barycenter to the origin, smooth by the heat
// flow, restore the volume of E and translate back.

#include "nearsphere/funcnorms.hpp"
#include "nearsphere/varmin.hpp"

#include <optional>

namespace nsph {

/// Operating points used in place of the unquantified smallness thresholds.
inline constexpr double kLambdaBar = 0.1;
inline constexpr double kSigmaBar = 0.05;

/// Heat semigroup on band-limited fields: degree-l coefficients times exp(-l(l+n-2) eps).
SpectralCoeffs heat_smooth(const SpectralCoeffs& w, double eps);

struct PipelineConfig {
  double lambda = 0.1;
  double sigma = 0.05;
  MinimizeConfig minimize;  // its lambda is overwritten with `lambda`
  std::optional<double> epsilon_override;

  void validate() const;
};

struct StabilityReport {
  double lambda = 0.0;
  double perimeter_E = 0.0, perimeter_F = 0.0;
  double volume_E = 0.0, volume_F = 0.0;
  double symdiff_EF = 0.0;
  double lhs = 0.0, rhs = 0.0, slack = 0.0;  // P(E) - P(F), lambda f(|E delta F|)
  double convexity_margin_F = 0.0;
  CNorms v_norms;             // deviation field of F about its center
  double c1_norm = 0.0, c2_norm = 0.0;
  bool in_class = false;      // ||v||_{C2} <= lambda
};

/// Evaluates the inequality P(E) - P(F) >= lambda f(|E delta F|) and the norms of F.
StabilityReport verify_inequality(const NearlySphericalSet& E, const NearlySphericalSet& F, double lambda,
                                  Profile profile = Profile::LogLinear);

struct PipelineResult {
  NearlySphericalSet F, H;
  MinimizeResult min;
  Eigen::VectorXd x0;
  double epsilon = 0.0;
  double rho = 1.0;
  double symdiff_EH = 0.0;
  StabilityReport report;
  bool convex = false;    // convexity_margin(F) > 0
  bool accepted = false;  // minimize converged with el_residual <= 1e-4
  double c1_constant = 0.0;  // ||v||_{C1} |log sigma| / lambda
  std::string flag;          // non-empty when the run is not a clean success
};

PipelineResult construct_F(const NearlySphericalSet& E, const PipelineConfig& cfg);

}  // namespace nsph
