#include "nearsphere/pipeline.hpp"

#include <cmath>
#include <stdexcept>

namespace nsph {

SpectralCoeffs heat_smooth(const SpectralCoeffs& w, double eps) {
  if (!(eps >= 0)) throw std::invalid_argument("heat_smooth: negative time");
  SpectralCoeffs out = w;
  out.a.array() *= (-eps * w.eigenvalues().array()).exp();
  return out;
}

void PipelineConfig::validate() const {
  if (!(lambda > 0 && lambda <= kLambdaBar)) throw std::invalid_argument("pipeline: lambda outside (0, lambda_bar]");
  if (!(sigma > 0 && sigma <= kSigmaBar)) throw std::invalid_argument("pipeline: sigma outside (0, sigma_bar]");
  if (epsilon_override && !(*epsilon_override >= 0)) throw std::invalid_argument("pipeline: negative epsilon");
  minimize.validate();
}

StabilityReport verify_inequality(const NearlySphericalSet& E, const NearlySphericalSet& F, double lambda,
                                  Profile profile) {
  StabilityReport r;
  r.lambda = lambda;
  r.volume_E = volume(E);
  r.volume_F = volume(F);
  if (std::abs(r.volume_E - r.volume_F) > 1e-8 * r.volume_E)
    throw std::invalid_argument("verify_inequality: volumes differ");
  r.perimeter_E = perimeter(E);
  r.perimeter_F = perimeter(F);
  r.symdiff_EF = symdiff(E, F);
  r.lhs = r.perimeter_E - r.perimeter_F;
  r.rhs = lambda * profile_f(r.symdiff_EF, profile);
  r.slack = r.lhs - r.rhs;
  r.convexity_margin_F = convexity_margin(F);
  r.v_norms = sobolev_c_norms(F.u);
  r.c1_norm = r.v_norms.w1inf_norm();
  r.c2_norm = r.v_norms.c2_norm();
  r.in_class = r.c2_norm <= lambda;
  return r;
}

PipelineResult construct_F(const NearlySphericalSet& E, const PipelineConfig& cfg) {
  cfg.validate();
  if (E.sigma_bound > cfg.sigma * (1 + 1e-12))
    throw std::invalid_argument("construct_F: E is not sigma-nearly spherical for the configured sigma");
  MinimizeConfig mc = cfg.minimize;
  mc.lambda = cfg.lambda;

  PipelineResult out;
  out.min = minimize(E, mc);
  out.H = out.min.H;
  out.accepted = out.min.converged && out.min.el_residual <= 1e-4;
  out.symdiff_EH = out.min.symdiff;

  out.x0 = barycenter(out.H);
  const NearlySphericalSet Hx0 = recenter(out.H, out.x0);
  out.epsilon = cfg.epsilon_override ? *cfg.epsilon_override : std::pow(out.symdiff_EH, 6);
  const NearlySphericalSet Fp = make_set(heat_smooth(Hx0.u, out.epsilon));
  Rescaled R = rescale_volume(Fp, volume(E));
  out.rho = R.rho;
  out.F = translate(R.set, out.x0);

  out.report = verify_inequality(E, out.F, cfg.lambda, mc.profile);
  out.convex = out.report.convexity_margin_F > 0;
  out.c1_constant = out.report.c1_norm * std::abs(std::log(cfg.sigma)) / cfg.lambda;
  if (!out.min.converged) out.flag = "minimizer not converged: " + out.min.diagnostic;
  else if (!out.accepted) out.flag = "Euler-Lagrange residual above 1e-4";
  else if (!out.convex) out.flag = "F is not convex";
  return out;
}

}  // namespace nsph
