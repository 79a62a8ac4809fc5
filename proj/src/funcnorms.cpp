#include "nearsphere/funcnorms.hpp"

#include <cmath>
#include <stdexcept>

namespace nsph {

namespace {

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("Lp exponent must be >= 1");
}

// Bisection on the monotone derivative of mu -> sum w |f - mu|^p.
InfMu inf_mu_p(const Eigen::ArrayXd& f, const Eigen::ArrayXd& w, double p) {
  double lo = f.minCoeff(), hi = f.maxCoeff();
  InfMu r;
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  while (hi - lo > 1e-13 * scale) {
    if (++r.iterations > 200) throw NumericalError("inf_mu: 1D search did not converge");
    const double mid = 0.5 * (lo + hi);
    const Eigen::ArrayXd d = f - mid;
    const double slope = -(w * d.abs().pow(p - 1.0) * d.sign()).sum();
    if (slope > 0) hi = mid;
    else lo = mid;
  }
  r.mu = 0.5 * (lo + hi);
  r.value = std::pow((w * (f - r.mu).abs().pow(p)).sum(), 1.0 / p);
  return r;
}

}  // namespace

double l2_norm(const SpectralCoeffs& f) { return f.a.norm(); }

double w12_norm(const SpectralCoeffs& f) {
  return std::sqrt(((1.0 + f.eigenvalues().array()) * f.a.array().square()).sum());
}

double wm12_norm(const SpectralCoeffs& f) {
  return std::sqrt((f.a.array().square() / (1.0 + f.eigenvalues().array())).sum());
}

double lp_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights, double p) {
  if (std::isinf(p)) return values.cwiseAbs().maxCoeff();
  check_p(p);
  return std::pow((weights.array() * values.array().abs().pow(p)).sum(), 1.0 / p);
}

double lp_norm(const SpectralCoeffs& f, double p) {
  GridPtr q = oversampled(*make_grid(f.n, f.L));
  return lp_norm(synthesize(f, q).values, q->weights(), p);
}

InfMu inf_mu(const Eigen::VectorXd& values, const Eigen::VectorXd& weights, double p) {
  if (std::isinf(p)) {
    const double lo = values.minCoeff(), hi = values.maxCoeff();
    return {0.5 * (lo + hi), 0.5 * (hi - lo), 0};
  }
  check_p(p);
  if (p == 2.0) {
    const double mu = weights.dot(values) / weights.sum();
    return {mu, lp_norm((values.array() - mu).matrix(), weights, 2.0), 0};
  }
  return inf_mu_p(values.array(), weights.array(), p);
}

InfMu inf_mu(const SpectralCoeffs& f, NormKind kind, double p) {
  if (kind == NormKind::Wm12 || kind == NormKind::L2) {
    SpectralCoeffs g = f;
    InfMu r;
    r.mu = f.mean();
    g.a[0] = 0.0;
    r.value = kind == NormKind::L2 ? l2_norm(g) : wm12_norm(g);
    return r;
  }
  GridPtr q = oversampled(*make_grid(f.n, f.L));
  return inf_mu(synthesize(f, q).values, q->weights(), kind == NormKind::Linf ? kInfinity : p);
}

Eigen::VectorXd boundary_weights(const NearlySphericalSet& E) {
  GridPtr q = oversampled(*E.grid);
  const Eigen::ArrayXd r = synthesize(E.u, q).values.array() + 1.0;
  const Eigen::ArrayXd g2 = grad_tau(E.u, q).comps.rowwise().squaredNorm().array();
  return (q->weights().array() * r.pow(E.dim() - 2) * (r.square() + g2).sqrt()).matrix();
}

double lp_norm_on_boundary(const NearlySphericalSet& E, const SpectralCoeffs& f, double p) {
  if (f.n != E.dim()) throw std::invalid_argument("field and set dimensions differ");
  GridPtr q = oversampled(*make_grid(f.n, std::max(f.L, E.band())));
  const SpectralCoeffs fe = f.resized(q->band());
  NearlySphericalSet Ee = E;
  if (E.band() != q->band()) Ee = make_set(E.u.resized(q->band()), E.center);
  return lp_norm(synthesize(fe, q).values, boundary_weights(Ee), p);
}

NormReport norm_report(const SpectralCoeffs& f, double p) {
  NormReport r;
  r.p = p;
  r.L2 = l2_norm(f);
  r.W12 = w12_norm(f);
  r.Wm12 = wm12_norm(f);
  r.Lp = lp_norm(f, p);
  r.mu_L2 = r.mu_Wm12 = f.mean();
  r.mu_Lp = inf_mu(f, NormKind::Lp, p).mu;
  r.mu_Linf = inf_mu(f, NormKind::Linf).mu;
  return r;
}

}  // namespace nsph
