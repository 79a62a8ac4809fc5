#pragma once

// Nearly spherical sets B + u about a center point, and their geometric
// functionals. All pointwise nonlinear expressions are evaluated on the
// 3/2-oversampled grid; sup norms are "discrete sup" over that node set.

#include "nearsphere/sphgrid.hpp"

#include <algorithm>
#include <stdexcept>

namespace nsph {

/// Thrown when a numerical procedure fails to converge or leaves its
/// admissible region.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Star-shaped body {center + t w (1 + u(w)) : 0 <= t < 1}.
struct NearlySphericalSet {
  Eigen::VectorXd center;
  SpectralCoeffs u;
  GridPtr grid;              // native grid, band == u.L
  double sigma_bound = 0.0;  // max(sup |u|, sup |D_tau u|)

  int dim() const { return u.n; }
  int band() const { return u.L; }
  /// Coefficients of the radius field 1 + u.
  SpectralCoeffs radius() const;
};

/// Validates sup|u| <= 1/2 and 1 + u > 0; records sigma_bound.
NearlySphericalSet make_set(const SpectralCoeffs& u, const Eigen::VectorXd& center);
NearlySphericalSet make_set(const SpectralCoeffs& u);
NearlySphericalSet make_ball(int n, int L, double r = 1.0, const Eigen::VectorXd& center = {});
NearlySphericalSet translate(const NearlySphericalSet& E, const Eigen::VectorXd& z);

double volume(const NearlySphericalSet& E);
double perimeter(const NearlySphericalSet& E);
Eigen::VectorXd barycenter(const NearlySphericalSet& E);

/// Lebesgue measure of the symmetric difference. If the centers differ, F is
/// first re-graphed about the center of E.
double symdiff(const NearlySphericalSet& E, const NearlySphericalSet& F);

struct CurvatureField {
  SpectralCoeffs S;        // mean curvature read on the sphere, band L
  SpectralCoeffs xi;       // log(1 + u), band L
  SphericalField S_nodal;  // S on the oversampled grid
  double xi_tail = 0.0;    // energy fraction of xi above degree L/2
  bool low_confidence = false;
};

/// Mean curvature from the weak identity
///   e^xi S = (n-1)/sqrt(1+|D xi|^2) - div(D xi / sqrt(1+|D xi|^2)),
/// with the divergence taken in Galerkin form on band L.
CurvatureField mean_curvature(const NearlySphericalSet& E);

/// Mean curvature and principal curvatures from the first and second
/// fundamental forms of w -> (1+u(w)) w, at oversampled nodes.
Eigen::MatrixXd principal_curvatures(const NearlySphericalSet& E);
Eigen::VectorXd pointwise_mean_curvature(const NearlySphericalSet& E);

/// The same set as a radial graph about the point p (absolute coordinates).
NearlySphericalSet regraph(const NearlySphericalSet& E, const Eigen::VectorXd& p);
/// E - z, graphed about the origin.
NearlySphericalSet recenter(const NearlySphericalSet& E, const Eigen::VectorXd& z);

struct Rescaled {
  NearlySphericalSet set;
  double rho = 1.0;
};
/// Dilation about the center to the target volume.
Rescaled rescale_volume(const NearlySphericalSet& E, double target);

/// Minimum principal curvature over oversampled nodes (signed curvature for n=2).
double convexity_margin(const NearlySphericalSet& E);

struct CNorms {
  double linf = 0.0;   // sup |u|
  double w1inf = 0.0;  // sup |D_tau u|
  double c2 = 0.0;     // sup of the operator norm of D^2_tau u
  double lap = 0.0;    // sup |Delta u|
  double c2_norm() const { return std::max({linf, w1inf, c2}); }
  double w1inf_norm() const { return std::max(linf, w1inf); }
};
CNorms sobolev_c_norms(const SpectralCoeffs& u);

struct IsoCheck {
  double deficit = 0.0;
  double asymmetry = 0.0;
};
IsoCheck isoperimetric_check(const NearlySphericalSet& E);

/// Constant c with volume(B + u + c) = target (Newton to machine precision).
double volume_fix_constant(const SpectralCoeffs& u, double target);

}  // namespace nsph
