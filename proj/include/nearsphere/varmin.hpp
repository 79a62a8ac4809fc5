#pragma once

// Penalized isoperimetric problem over radial graphs:
//   minimize P(G) + 2 lambda f(|E delta G|)  subject to |G| = |B|.
//
// The symmetric difference inside the energy is the nodal quadrature of
// (1/n) sqrt((r_G^n - r_E^n)^2 + delta^2) on the oversampled grid. The
// minimizer is found by damped primal-dual Newton steps on the tangent space of the
// volume constraint, exact radial rescaling to the volume after each step,
// Armijo backtracking, and continuation of delta down to mollifier_delta.

#include "nearsphere/setcalc.hpp"
#include "nearsphere/stabfun.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nsph {

struct MinimizeConfig {
  double lambda = 0.1;
  int L = 16;
  int max_iters = 400;            // Newton iterations over all continuation stages
  double grad_tol = 1e-7;         // final Galerkin residual; round-off floor is about 1e-16/delta
  double mollifier_delta = 1e-8;  // in [1e-10, 1e-6]
  std::uint64_t seed = 0;         // recorded; the method is deterministic
  Profile profile = Profile::LogLinear;

  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double energy = 0.0, perimeter = 0.0, penalty = 0.0, step = 0.0, residual = 0.0, delta = 0.0;
};

struct MinimizeResult {
  NearlySphericalSet H;
  double energy = 0.0;           // P(H) + 2 lambda f(|E delta H|), accurate symdiff
  double energy_discrete = 0.0;  // the mollified objective actually minimized
  double perimeter = 0.0;
  double symdiff = 0.0;
  double el_residual = 0.0;  // Galerkin residual of the Euler-Lagrange equation
  double el_residual_pointwise = 0.0;
  double mu_hat = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostic;
  std::vector<TraceRow> trace;
};

MinimizeResult minimize(const NearlySphericalSet& E, const MinimizeConfig& cfg);

struct ELResidual {
  double galerkin = 0.0;   // |P_L[(S + 2 lambda f' chi - mu) r^{n-1}]|, chi mollified
  double pointwise = 0.0;  // L2(dH) norm of S + 2 lambda f' sign(r_H - r_E) - mu
  double mu_hat = 0.0;
};

/// Euler-Lagrange diagnostics of H for the data E. The Galerkin residual is
/// the norm of the constrained gradient of the mollified energy; mu_hat is
/// its least-squares multiplier.
ELResidual el_residual(const NearlySphericalSet& H, const NearlySphericalSet& E, double lambda,
                       double delta = 1e-8, Profile profile = Profile::LogLinear);

/// Energy of a competitor G (accurate symdiff).
double penalized_energy(const NearlySphericalSet& G, const NearlySphericalSet& E, double lambda,
                        Profile profile = Profile::LogLinear);

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);

}  // namespace nsph
