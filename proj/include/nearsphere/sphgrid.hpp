#pragma once

// Discretization of the unit sphere S^{n-1} for n in {2, 3}: quadrature
// grids, real orthonormal harmonics, and tangential calculus.
//
// Harmonics are orthonormal with respect to the unnormalized surface
// measure. Coefficient order is degree ascending, then order ascending:
//   n = 2: (0,0), (1,-1), (1,1), (2,-2), (2,2), ...   m = -l is sin(l phi)
//   n = 3: (l, -l) ... (l, l) for each l;              m < 0 is sin(|m| phi)
// No Condon-Shortley phase is used.

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace nsph {

inline constexpr double kPi = 3.14159265358979323846;

/// Surface measure |S^{n-1}|.
double sphere_area(int n);
/// Volume of the unit ball in R^n.
double ball_volume(int n);

int num_coeffs(int n, int L);
int coeff_index(int n, int l, int m);
/// Degree l of the coefficient stored at position idx.
int coeff_degree(int n, int idx);
/// Laplace-Beltrami eigenvalue l(l+n-2).
inline double sphere_eigenvalue(int n, int l) { return double(l) * double(l + n - 2); }

/// Product quadrature grid. `band()` is the largest harmonic degree carried
/// by fields on this grid; `resolution()` controls the node count, and the
/// rule integrates harmonic products up to degree 2*resolution exactly.
class SphereGrid {
 public:
  SphereGrid(int n, int band, int resolution);

  int dim() const { return n_; }
  int band() const { return band_; }
  int resolution() const { return res_; }
  Eigen::Index size() const { return weights_.size(); }

  /// One row per node, unit vectors in R^n.
  const Eigen::MatrixXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  // Ring structure. Node index = ring * ring_size() + k.
  int rings() const { return int(ring_cos_.size()); }
  int ring_size() const { return nlon_; }
  /// Latitude weight of a ring (Gauss-Legendre weight in cos(theta) for n=3,
  /// 1 for n=2). Node weight = ring_weight * 2 pi / ring_size.
  double ring_weight(int j) const { return ring_w_[j]; }
  double ring_cos(int j) const { return ring_cos_[j]; }
  double ring_sin(int j) const { return ring_sin_[j]; }
  double longitude(int k) const;

 private:
  int n_, band_, res_, nlon_;
  std::vector<double> ring_cos_, ring_sin_, ring_w_;
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd weights_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

/// Grid at native resolution (resolution == band). Grids are cached.
GridPtr make_grid(int n, int L);
GridPtr make_grid(int n, int L, int resolution);
/// Same band, resolution ceil(3L/2): used for every nonlinear pointwise
/// expression so that the result projects back to band L without aliasing.
GridPtr oversampled(const SphereGrid& g);

struct SpectralCoeffs {
  int n = 3;
  int L = 0;
  Eigen::VectorXd a;

  SpectralCoeffs() = default;
  SpectralCoeffs(int n_, int L_) : n(n_), L(L_), a(Eigen::VectorXd::Zero(num_coeffs(n_, L_))) {}

  double& operator()(int l, int m) { return a[coeff_index(n, l, m)]; }
  double operator()(int l, int m) const { return a[coeff_index(n, l, m)]; }

  /// Coefficients of a constant function c.
  static SpectralCoeffs constant(int n, int L, double c);
  /// Per-coefficient eigenvalues l(l+n-2).
  Eigen::VectorXd eigenvalues() const;
  /// Truncate or zero-pad to another band limit.
  SpectralCoeffs resized(int newL) const;
  /// Mean value over the sphere.
  double mean() const;
};

SpectralCoeffs operator+(const SpectralCoeffs& x, const SpectralCoeffs& y);
SpectralCoeffs operator-(const SpectralCoeffs& x, const SpectralCoeffs& y);
SpectralCoeffs operator*(double s, const SpectralCoeffs& x);

struct SphericalField {
  GridPtr grid;
  Eigen::VectorXd values;
};

/// Tangent vector field in the orthonormal frame (e_theta, e_phi) for n=3,
/// (e_phi) for n=2. One row per node.
struct TangentField {
  GridPtr grid;
  Eigen::MatrixXd comps;
};

/// Covariant Hessian in the same frame: columns (tt, tp, pp) for n=3, one
/// column for n=2.
struct HessianField {
  GridPtr grid;
  Eigen::MatrixXd comps;

  /// 2x2 (or 1x1) matrix at node i.
  Eigen::MatrixXd at(Eigen::Index i) const;
};

SpectralCoeffs analyze(const SphericalField& f);
SphericalField synthesize(const SpectralCoeffs& c, const GridPtr& grid);

TangentField grad_tau(const SpectralCoeffs& c, const GridPtr& grid);
TangentField grad_tau(const SphericalField& f);
HessianField hessian_tau(const SpectralCoeffs& c, const GridPtr& grid);

/// Galerkin divergence: the band-L coefficients of div V, defined by
/// <div V, Y> = -<V, grad Y> under the grid quadrature.
SpectralCoeffs div_tau(const TangentField& v);
SpectralCoeffs laplace_tau(const SpectralCoeffs& c);
SphericalField laplace_tau(const SphericalField& f);

/// Quadrature of a nodal field.
double integrate(const SphericalField& f);
double integrate(const SphereGrid& g, const Eigen::VectorXd& values);

/// Ambient-coordinate value and tangential gradient at an arbitrary unit
/// direction (direct evaluation, O(L^2)).
struct PointValue {
  double value = 0.0;
  Eigen::VectorXd grad;
};
PointValue evaluate(const SpectralCoeffs& c, const Eigen::VectorXd& dir);

/// Frame vectors (e_theta, e_phi) at node i as columns (n=3), or e_phi (n=2).
Eigen::MatrixXd tangent_frame(const SphereGrid& g, Eigen::Index i);

/// Per-ring longitude series f(ring j, phi) = sum_m C(j,m) cos(m phi) + S(j,m) sin(m phi).
struct RingSeries {
  Eigen::MatrixXd cosc;  // rings x (L+1)
  Eigen::MatrixXd sinc;
};
RingSeries ring_series(const SpectralCoeffs& c, const SphereGrid& grid);
/// Same at arbitrary latitudes z = cos(theta) (n = 3); for n = 2 every row is the circle.
RingSeries ring_series(const SpectralCoeffs& c, const Eigen::VectorXd& z);
/// Inverse direction: given per-ring integrals G(j,m) = int f cos(m phi) dphi
/// (and sine analogues), accumulate sum_j ring_weight(j) * <Y_lm restricted to ring j>.
SpectralCoeffs ring_project(const Eigen::MatrixXd& cos_int, const Eigen::MatrixXd& sin_int,
                            const SphereGrid& grid);
/// Same with explicit latitudes and latitude weights.
SpectralCoeffs ring_project(const Eigen::MatrixXd& cos_int, const Eigen::MatrixXd& sin_int, int n, int L,
                            const Eigen::VectorXd& z, const Eigen::VectorXd& w);

/// Dense synthesis operators on a grid: values = val * a, gradient component
/// c = grad[c] * a (tangent frame as in TangentField).
struct SynthesisMatrices {
  Eigen::MatrixXd val;
  std::vector<Eigen::MatrixXd> grad;
};
SynthesisMatrices synthesis_matrices(int n, int L, const GridPtr& grid);

/// Value of a real orthonormal harmonic at a direction (test and oracle helper).
double harmonic(int n, int l, int m, const Eigen::VectorXd& dir);

}  // namespace nsph
