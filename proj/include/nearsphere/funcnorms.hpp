#pragma once

// Sobolev and Lebesgue norms on the sphere. Sobolev norms are spectral:
//   |f|_{W12}^2 = sum (1 + lambda_l) a^2,   |f|_{W-12}^2 = sum a^2 / (1 + lambda_l).

#include "nearsphere/setcalc.hpp"

#include <limits>

namespace nsph {

double l2_norm(const SpectralCoeffs& f);
double w12_norm(const SpectralCoeffs& f);
double wm12_norm(const SpectralCoeffs& f);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum w |f|^p)^{1/p}, or max |f| for p = inf.
double lp_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights, double p);
/// L^p norm on the sphere, sampled on the oversampled grid.
double lp_norm(const SpectralCoeffs& f, double p);

enum class NormKind { Wm12, L2, Lp, Linf };

struct InfMu {
  double mu = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// inf over constants mu of |f - mu| in the chosen norm. p is used for Lp only.
InfMu inf_mu(const SpectralCoeffs& f, NormKind kind, double p = 2.0);
/// Weighted discrete version (Lp / Linf) for nodal data, e.g. on a boundary.
InfMu inf_mu(const Eigen::VectorXd& values, const Eigen::VectorXd& weights, double p);

/// Area element (1+u)^{n-2} sqrt((1+u)^2 + |D u|^2) times the node weights of
/// the oversampled grid of E.
Eigen::VectorXd boundary_weights(const NearlySphericalSet& E);
/// L^p norm over the boundary of E of f(w) pulled back along w -> (1+u(w)) w.
double lp_norm_on_boundary(const NearlySphericalSet& E, const SpectralCoeffs& f, double p);

struct NormReport {
  double L2 = 0.0, W12 = 0.0, Wm12 = 0.0, Lp = 0.0, p = 2.0;
  double mu_L2 = 0.0, mu_Wm12 = 0.0, mu_Lp = 0.0, mu_Linf = 0.0;
};
NormReport norm_report(const SpectralCoeffs& f, double p);

}  // namespace nsph
