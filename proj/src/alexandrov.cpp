#include "nearsphere/alexandrov.hpp"

#include <cmath>

namespace nsph {

namespace {

// Golden-section maximum of h on [0, T].
template <class F>
double golden_max(F&& h, double T) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = T;
  double c = b - g * (b - a), d = a + g * (b - a);
  double hc = h(c), hd = h(d);
  for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
    if (hc >= hd) {
      b = d, d = c, hd = hc;
      c = b - g * (b - a), hc = h(c);
    } else {
      a = c, c = d, hc = hd;
      d = a + g * (b - a), hd = h(d);
    }
  }
  return 0.5 * (a + b);
}

// sign * max of sign * f over the sphere.
double polished_extremum(const SpectralCoeffs& f, const SphereGrid& q, const Eigen::VectorXd& nodal, double sign) {
  Eigen::Index best = 0;
  (sign * nodal.array()).maxCoeff(&best);
  Eigen::VectorXd x = q.nodes().row(best).transpose();
  double val = sign * evaluate(f, x).value;
  const double T = 2.0 * kPi / (2 * f.L + 2);
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd g = sign * evaluate(f, x).grad;
    const double gn = g.norm();
    if (gn < 1e-13) break;
    const Eigen::VectorXd e = g / gn;
    auto along = [&](double t) { return Eigen::VectorXd(std::cos(t) * x + std::sin(t) * e); };
    const double t = golden_max([&](double s) { return sign * evaluate(f, along(s)).value; }, T);
    const Eigen::VectorXd xn = along(t).normalized();
    const double vn = sign * evaluate(f, xn).value;
    if (!(vn > val)) break;
    const bool tiny = vn - val < 1e-16 * std::max(1.0, std::abs(val));
    x = xn, val = vn;
    if (tiny) break;
  }
  return sign * val;
}

}  // namespace

double w22_norm(const SpectralCoeffs& w) {
  const Eigen::ArrayXd lam = w.eigenvalues().array();
  return std::sqrt((w.a.array().square() * (1.0 + lam + lam.square() - (w.n - 2) * lam)).sum());
}

double linearized_ratio(int n, int l) {
  if (l < 2) throw std::invalid_argument("linearized_ratio: degree must be at least 2");
  const double lam = sphere_eigenvalue(n, l);
  return (1.0 + lam) / (lam - (n - 1));
}

Radii radii(const NearlySphericalSet& H) {
  GridPtr q = oversampled(*H.grid);
  const Eigen::VectorXd v = synthesize(H.u, q).values;
  return {1.0 + polished_extremum(H.u, *q, v, -1.0), 1.0 + polished_extremum(H.u, *q, v, 1.0)};
}

AlexReport alex_check(const NearlySphericalSet& H0, const AlexConfig& cfg) {
  if (!(cfg.p >= 1.0)) throw std::invalid_argument("alex_check: p must be >= 1");
  const int n = H0.dim();
  AlexReport rep;
  rep.p = cfg.p;
  rep.shift = Eigen::VectorXd::Zero(n);
  NearlySphericalSet H = H0;
  if (cfg.recenter) {
    rep.shift = barycenter(H0) - H0.center;
    H = rep.shift.norm() > 1e-15 ? recenter(H0, barycenter(H0)) : translate(H0, -H0.center);
  }
  const SpectralCoeffs& w = H.u;
  const CurvatureField cf = mean_curvature(H);
  rep.low_confidence = cf.low_confidence;

  const InfMu im = inf_mu(cf.S, NormKind::Wm12);
  rep.w12_of_w = w12_norm(w);
  rep.mu_star = im.mu;
  rep.mu_gap = std::abs(im.mu - (n - 1));
  rep.wm12_of_S_minus_mu = im.value;
  rep.lhs = rep.w12_of_w + rep.mu_gap;
  rep.rhs = rep.wm12_of_S_minus_mu;
  rep.ratio_defined = rep.rhs > 1e-14;
  rep.ratio = rep.ratio_defined ? rep.lhs / rep.rhs : 0.0;

  rep.symdiff_to_ball = symdiff(H, make_ball(n, H.band(), 1.0, H.center));
  rep.radii = radii(H);
  rep.lp_oscillation = inf_mu(cf.S_nodal.values, boundary_weights(H), cfg.p).value;
  rep.w2p_proxy = w22_norm(w);
  rep.sigma = H.sigma_bound;

  const double xi2 = l2_norm(cf.xi);
  if (rep.sigma > 0 && xi2 > 0) {
    double a1 = 0.0;
    for (int m = -1; m <= 1; ++m) {
      if (n == 2 && m == 0) continue;
      if (cf.xi.L >= 1) a1 = std::max(a1, std::abs(cf.xi(1, m)));
    }
    rep.first_mode_C = a1 / (rep.sigma * xi2);
    rep.mean_value_ratio = std::abs(cf.xi.a[0] * std::sqrt(sphere_area(n))) / (xi2 * xi2);
    rep.mean_value_C = (rep.mean_value_ratio - 0.5 * (n - 1)) / rep.sigma;
  }
  return rep;
}

}  // namespace nsph
