#pragma once

// The sharpness family E_theta = B + u_theta: small W^{1,inf} and Laplacian,
// large Hessian. u_theta = theta^2 v_theta, where v_theta is the planar
// witness g(x,y) = x y log(x^2 + y^2 + delta^2) carried to the sphere by the
// exponential chart at the north pole and cut off smoothly at chart_radius.

#include "nearsphere/pipeline.hpp"

#include <string>
#include <vector>

namespace nsph {

struct CounterexampleConfig {
  double theta = 0.3;         // (0, 0.5]
  double chart_radius = 0.1;  // <= 0.2
  double lambda = 0.1;
  int L = 24;                  // band of E_theta
  double trunc_c = 0.5;        // delta(theta) = chart_radius * exp(-trunc_c / theta^3)

  void validate() const;
};

/// Truncation radius requested by theta, and the one the band can carry.
double requested_truncation(const CounterexampleConfig& cfg);
double resolvable_truncation(const CounterexampleConfig& cfg);

/// Planar witness x y log(r^2 + delta^2) and its Laplacian
/// 8xy/(r^2 + delta^2) + 4xy delta^2/(r^2 + delta^2)^2 (bounded by 5).
double witness(double x, double y, double delta);
double witness_laplacian(double x, double y, double delta);

/// v_theta before band limiting (amplitude 1), at a unit direction.
double transplant(const CounterexampleConfig& cfg, const Eigen::Vector3d& w);

struct NormBrackets {
  double linf = 0, w1inf = 0, lap = 0, hess = 0;  // of u_theta, dense samples
  bool w1inf_ok = false, lap_ok = false, hess_ok = false;  // factor-2 brackets
};

struct ThetaSet {
  NearlySphericalSet E;
  double theta = 0.0;
  double delta_requested = 0.0, delta_used = 0.0;
  bool resolved = false;  // delta_used == delta_requested
  double amplitude = 0.0;  // normalization of v_theta
  double volume_constant = 0.0;
  NormBrackets norms;
  double convexity_margin = 0.0;
};

ThetaSet build_E_theta(const CounterexampleConfig& cfg);

struct SharpnessRow {
  double theta = 0.0;
  bool converged = false;
  double perimeter_E = 0, perimeter_F = 0, perimeter_B = 0;
  double symdiff_EF = 0, symdiff_EB = 0;
  double rho = 0.0;     // (P(E) - P(F)) / |E delta F|
  double C_B = 0.0;     // (P(E) - P(B)) / (theta |E delta B|)
  double slack = 0.0;   // of the f-profile inequality for F
  double margin_E = 0.0, margin_F = 0.0;
  NormBrackets norms;
  bool resolved = false;
};

struct SharpnessReport {
  std::vector<SharpnessRow> rows;
  int excluded = 0;
  bool rho_monotone = false;   // rho increases with theta
  double fit_slope = 0.0;      // least squares rho ~ C theta through the origin
  double fit_max = 0.0;        // max rho / theta
  bool linear_fails = false;   // rho < lambda at the smallest theta with slack >= 0
  std::string summary;
};

/// One sharpness measurement on a given E (rejects balls).
SharpnessRow sharpness_entry(const NearlySphericalSet& E, double theta, double lambda, const PipelineConfig& pcfg);

SharpnessReport sharpness_experiment(const std::vector<double>& thetas, const CounterexampleConfig& base,
                                     const PipelineConfig& pcfg = {});

/// Hessian of F(s, z) = (1+s)^{n-1} sqrt(1 + |z|^2/(1+s)^2) in (s, z), closed form.
Eigen::MatrixXd perimeter_integrand_hessian(int n, double s, const Eigen::VectorXd& z);

}  // namespace nsph
