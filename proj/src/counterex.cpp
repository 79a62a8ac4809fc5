#include "nearsphere/counterex.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace nsph {

namespace {

// C-infinity step: 1 on [0, 1/2], 0 on [1, inf).
double cutoff(double t) {
  auto h = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = h(1.0 - t), b = h(t - 0.5);
  return a / (a + b);
}

NormBrackets measure(const SpectralCoeffs& u, double theta) {
  GridPtr q = make_grid(u.n, u.L, 4 * u.L);
  NormBrackets nb;
  nb.linf = synthesize(u, q).values.cwiseAbs().maxCoeff();
  nb.w1inf = std::max(nb.linf, std::sqrt(grad_tau(u, q).comps.rowwise().squaredNorm().maxCoeff()));
  const HessianField H = hessian_tau(u, q);
  for (Eigen::Index i = 0; i < q->size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Eigen::Matrix2d(H.at(i)));
    nb.hess = std::max(nb.hess, es.eigenvalues().cwiseAbs().maxCoeff());
    nb.lap = std::max(nb.lap, std::abs(H.comps(i, 0) + H.comps(i, 2)));
  }
  const double t2 = theta * theta;
  nb.w1inf_ok = nb.w1inf <= 2 * t2;
  nb.lap_ok = nb.lap <= 2 * t2;
  nb.hess_ok = nb.hess >= 0.5 / theta && nb.hess <= 2 / theta;
  return nb;
}

}  // namespace

void CounterexampleConfig::validate() const {
  if (!(theta > 0 && theta <= 0.5)) throw std::invalid_argument("counterexample: theta must lie in (0, 0.5]");
  if (!(chart_radius > 0 && chart_radius <= 0.2)) throw std::invalid_argument("counterexample: chart_radius must lie in (0, 0.2]");
  if (!(lambda > 0)) throw std::invalid_argument("counterexample: lambda must be positive");
  if (L < 4) throw std::invalid_argument("counterexample: band too small");
  if (!(trunc_c > 0)) throw std::invalid_argument("counterexample: trunc_c must be positive");
}

double requested_truncation(const CounterexampleConfig& cfg) {
  return cfg.chart_radius * std::exp(-cfg.trunc_c / std::pow(cfg.theta, 3));
}

double resolvable_truncation(const CounterexampleConfig& cfg) { return kPi / cfg.L; }

double witness(double x, double y, double delta) { return x * y * std::log(x * x + y * y + delta * delta); }

double witness_laplacian(double x, double y, double delta) {
  const double q = x * x + y * y + delta * delta;
  return 8 * x * y / q + 4 * x * y * delta * delta / (q * q);
}

double transplant(const CounterexampleConfig& cfg, const Eigen::Vector3d& w) {
  const double s = std::acos(std::clamp(w.z(), -1.0, 1.0));
  const double R = cfg.chart_radius;
  if (s >= R) return 0.0;
  const double rho = std::hypot(w.x(), w.y());
  const double X = rho > 0 ? s * w.x() / rho : 0.0, Y = rho > 0 ? s * w.y() / rho : 0.0;
  const double delta = std::max(requested_truncation(cfg), resolvable_truncation(cfg));
  return cutoff(s / R) * witness(X, Y, delta);
}

ThetaSet build_E_theta(const CounterexampleConfig& cfg) {
  cfg.validate();
  const int n = 3;
  ThetaSet ts;
  ts.theta = cfg.theta;
  ts.delta_requested = requested_truncation(cfg);
  ts.delta_used = std::max(ts.delta_requested, resolvable_truncation(cfg));
  ts.resolved = ts.delta_used == ts.delta_requested;

  // project the transplant on a fine rule so the band-L coefficients are not aliased
  GridPtr fine = make_grid(n, cfg.L, 4 * cfg.L);
  Eigen::VectorXd vals(fine->size());
  for (Eigen::Index i = 0; i < fine->size(); ++i) vals[i] = transplant(cfg, fine->nodes().row(i).transpose());
  SpectralCoeffs v = analyze({fine, vals});
  v.a[0] = 0.0;

  // largest amplitude with |v|_{W1inf} <= 1 and |Lap v| <= 1
  const NormBrackets unit = measure(v, cfg.theta);
  const double worst = std::max(unit.w1inf, unit.lap);
  if (!(worst > 0)) throw NumericalError("counterexample: witness vanishes at this band");
  ts.amplitude = 1.0 / worst;

  SpectralCoeffs u = (cfg.theta * cfg.theta * ts.amplitude) * v;
  ts.volume_constant = volume_fix_constant(u, ball_volume(n));
  u.a[0] += ts.volume_constant * std::sqrt(sphere_area(n));
  ts.E = make_set(u);
  ts.norms = measure(u, cfg.theta);
  ts.convexity_margin = convexity_margin(ts.E);
  return ts;
}

SharpnessRow sharpness_entry(const NearlySphericalSet& E, double theta, double lambda, const PipelineConfig& pcfg) {
  if (E.dim() != 3) throw std::invalid_argument("sharpness: n = 3 only");
  const NearlySphericalSet B = make_ball(3, E.band(), 1.0, E.center);
  SharpnessRow row;
  row.theta = theta;
  row.symdiff_EB = symdiff(E, B);
  if (row.symdiff_EB < 1e-12) throw std::invalid_argument("sharpness: E is a ball, the ratio is 0/0");
  PipelineConfig pc = pcfg;
  pc.lambda = lambda;
  pc.sigma = std::max(pc.sigma, E.sigma_bound);
  const PipelineResult res = construct_F(E, pc);
  row.converged = res.accepted;
  row.perimeter_E = res.report.perimeter_E;
  row.perimeter_F = res.report.perimeter_F;
  row.perimeter_B = perimeter(B);
  row.symdiff_EF = res.report.symdiff_EF;
  row.rho = row.symdiff_EF > 0 ? (row.perimeter_E - row.perimeter_F) / row.symdiff_EF : 0.0;
  row.C_B = (row.perimeter_E - row.perimeter_B) / (theta * row.symdiff_EB);
  row.slack = res.report.slack;
  row.margin_E = convexity_margin(E);
  row.margin_F = res.report.convexity_margin_F;
  return row;
}

SharpnessReport sharpness_experiment(const std::vector<double>& thetas, const CounterexampleConfig& base,
                                     const PipelineConfig& pcfg) {
  SharpnessReport rep;
  for (double th : thetas) {
    CounterexampleConfig c = base;
    c.theta = th;
    const ThetaSet ts = build_E_theta(c);
    SharpnessRow row = sharpness_entry(ts.E, th, base.lambda, pcfg);
    row.norms = ts.norms;
    row.resolved = ts.resolved;
    if (!row.converged) {
      ++rep.excluded;
      continue;
    }
    rep.rows.push_back(row);
  }
  std::sort(rep.rows.begin(), rep.rows.end(), [](const auto& a, const auto& b) { return a.theta < b.theta; });
  rep.rho_monotone = rep.rows.size() >= 2;
  double num = 0, den = 0;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (i > 0 && !(rep.rows[i].rho > rep.rows[i - 1].rho)) rep.rho_monotone = false;
    num += rep.rows[i].rho * rep.rows[i].theta;
    den += rep.rows[i].theta * rep.rows[i].theta;
    rep.fit_max = std::max(rep.fit_max, rep.rows[i].rho / rep.rows[i].theta);
  }
  rep.fit_slope = den > 0 ? num / den : 0.0;
  if (!rep.rows.empty()) {
    const SharpnessRow& r0 = rep.rows.front();
    rep.linear_fails = r0.rho < base.lambda && r0.slack >= -1e-8;
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "rho(theta) %s in theta, fit rho <= %.4g theta; at theta = %.3g rho = %.3g %s lambda = %.3g: "
                "f(t) = t %s",
                rep.rho_monotone ? "increasing" : "NOT monotone", rep.fit_slope,
                rep.rows.empty() ? 0.0 : rep.rows.front().theta, rep.rows.empty() ? 0.0 : rep.rows.front().rho,
                rep.linear_fails ? "<" : ">=", base.lambda,
                rep.linear_fails ? "cannot hold on this family" : "not excluded by this run");
  rep.summary = buf;
  return rep;
}

Eigen::MatrixXd perimeter_integrand_hessian(int n, double s, const Eigen::VectorXd& z) {
  // F = (1+s)^{n-2} sqrt((1+s)^2 + |z|^2) = a^{n-2} W
  const double a = 1.0 + s;
  const double W = std::sqrt(a * a + z.squaredNorm());
  const int d = int(z.size());
  Eigen::MatrixXd H(d + 1, d + 1);
  const double p = std::pow(a, n - 2), p1 = (n - 2) * std::pow(a, n - 3), p2 = (n - 2) * (n - 3) * std::pow(a, n - 4);
  const double Wa = a / W, Waa = 1.0 / W - a * a / (W * W * W);
  H(0, 0) = p2 * W + 2 * p1 * Wa + p * Waa;
  const Eigen::VectorXd Wz = z / W;
  const Eigen::VectorXd Waz = -a * z / (W * W * W);
  H.block(1, 0, d, 1) = p1 * Wz + p * Waz;
  H.block(0, 1, 1, d) = H.block(1, 0, d, 1).transpose();
  H.block(1, 1, d, d) = p * (Eigen::MatrixXd::Identity(d, d) / W - z * z.transpose() / (W * W * W));
  return H;
}

}  // namespace nsph
