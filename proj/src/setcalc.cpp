#include "nearsphere/setcalc.hpp"

#include "nearsphere/symdiff.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace nsph {

namespace {

struct Nodal {
  GridPtr q;
  Eigen::VectorXd r;   // 1 + u
  Eigen::MatrixXd du;  // tangential gradient components
};

Nodal nodal(const SpectralCoeffs& u) {
  GridPtr q = oversampled(*make_grid(u.n, u.L));
  Nodal nd{q, synthesize(u, q).values.array() + 1.0, grad_tau(u, q).comps};
  return nd;
}

Eigen::VectorXd zero_center(int n) { return Eigen::VectorXd::Zero(n); }

}  // namespace

SpectralCoeffs NearlySphericalSet::radius() const { return u + SpectralCoeffs::constant(u.n, u.L, 1.0); }

NearlySphericalSet make_set(const SpectralCoeffs& u, const Eigen::VectorXd& center) {
  if (center.size() != u.n) throw std::invalid_argument("center dimension does not match field");
  Nodal nd = nodal(u);
  const double sup_u = (nd.r.array() - 1.0).abs().maxCoeff();
  if (!(sup_u <= 0.5)) throw std::invalid_argument("nearly spherical set requires sup|u| <= 1/2, got " + std::to_string(sup_u));
  if (nd.r.minCoeff() <= 0.0) throw std::invalid_argument("radius field must be positive");
  NearlySphericalSet E;
  E.center = center;
  E.u = u;
  E.grid = make_grid(u.n, u.L);
  E.sigma_bound = std::max(sup_u, std::sqrt(nd.du.rowwise().squaredNorm().maxCoeff()));
  return E;
}

NearlySphericalSet make_set(const SpectralCoeffs& u) { return make_set(u, zero_center(u.n)); }

NearlySphericalSet make_ball(int n, int L, double r, const Eigen::VectorXd& center) {
  return make_set(SpectralCoeffs::constant(n, L, r - 1.0), center.size() ? center : zero_center(n));
}

NearlySphericalSet translate(const NearlySphericalSet& E, const Eigen::VectorXd& z) {
  NearlySphericalSet F = E;
  F.center += z;
  return F;
}

double volume(const NearlySphericalSet& E) {
  GridPtr q = oversampled(*E.grid);
  const Eigen::VectorXd r = synthesize(E.u, q).values.array() + 1.0;
  return integrate(*q, r.array().pow(E.dim()).matrix()) / E.dim();
}

double perimeter(const NearlySphericalSet& E) {
  Nodal nd = nodal(E.u);
  const int n = E.dim();
  const Eigen::ArrayXd r = nd.r.array();
  const Eigen::ArrayXd J = r.pow(n - 2) * (r.square() + nd.du.rowwise().squaredNorm().array()).sqrt();
  return integrate(*nd.q, J.matrix());
}

Eigen::VectorXd barycenter(const NearlySphericalSet& E) {
  GridPtr q = oversampled(*E.grid);
  const int n = E.dim();
  const Eigen::ArrayXd r = synthesize(E.u, q).values.array() + 1.0;
  const Eigen::VectorXd wr = (q->weights().array() * r.pow(n + 1) / double(n + 1)).matrix();
  const double vol = q->weights().dot((r.pow(n) / double(n)).matrix());
  return E.center + q->nodes().transpose() * wr / vol;
}

double symdiff(const NearlySphericalSet& E, const NearlySphericalSet& F) {
  if (E.dim() != F.dim()) throw std::invalid_argument("symdiff: dimension mismatch");
  const int L = std::max(E.band(), F.band());
  NearlySphericalSet G = F;
  if ((F.center - E.center).norm() > 0.0) G = regraph(F, E.center);
  const SpectralCoeffs rE = E.radius().resized(L), rG = G.radius().resized(L);
  return symdiff_measure(rE, rG);
}

CurvatureField mean_curvature(const NearlySphericalSet& E) {
  const int n = E.dim();
  Nodal nd = nodal(E.u);
  const Eigen::ArrayXd r = nd.r.array();
  Eigen::MatrixXd gxi = nd.du.array().colwise() / r;
  const Eigen::ArrayXd root = (1.0 + gxi.rowwise().squaredNorm().array()).sqrt();
  const Eigen::VectorXd A = ((n - 1) / root).matrix();
  TangentField q{nd.q, gxi.array().colwise() / root};
  const SpectralCoeffs T = analyze({nd.q, A}) - div_tau(q);  // e^xi S
  CurvatureField cf;
  cf.S_nodal = {nd.q, (synthesize(T, nd.q).values.array() / r).matrix()};
  cf.S = analyze(cf.S_nodal);
  cf.xi = analyze({nd.q, r.log().matrix()});
  double total = 0.0, tail = 0.0;
  for (Eigen::Index i = 0; i < cf.xi.a.size(); ++i) {
    const double e = cf.xi.a[i] * cf.xi.a[i];
    total += e;
    if (2 * coeff_degree(n, int(i)) > E.band()) tail += e;
  }
  cf.xi_tail = total > 0 ? tail / total : 0.0;
  cf.low_confidence = cf.xi_tail > 1e-6;
  return cf;
}

Eigen::MatrixXd principal_curvatures(const NearlySphericalSet& E) {
  const int n = E.dim();
  Nodal nd = nodal(E.u);
  HessianField H = hessian_tau(E.u, nd.q);
  Eigen::MatrixXd k(nd.q->size(), n - 1);
  for (Eigen::Index i = 0; i < nd.q->size(); ++i) {
    const double r = nd.r[i];
    const Eigen::VectorXd g = nd.du.row(i).transpose();
    const double W = std::sqrt(r * r + g.squaredNorm());
    if (n == 2) {
      k(i, 0) = (r * r + 2 * g.squaredNorm() - r * H.comps(i, 0)) / (W * W * W);
      continue;
    }
    Eigen::Matrix2d first = r * r * Eigen::Matrix2d::Identity() + g * g.transpose();
    Eigen::Matrix2d second = (r * r * Eigen::Matrix2d::Identity() + 2 * g * g.transpose() - r * H.at(i)) / W;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(second, first);
    k.row(i) = es.eigenvalues().transpose();
  }
  return k;
}

Eigen::VectorXd pointwise_mean_curvature(const NearlySphericalSet& E) { return principal_curvatures(E).rowwise().sum(); }

NearlySphericalSet regraph(const NearlySphericalSet& E, const Eigen::VectorXd& p) {
  const int n = E.dim();
  GridPtr q = oversampled(*E.grid);
  const Eigen::VectorXd d = p - E.center;
  {
    const double rp = 1.0 + (d.norm() > 0 ? evaluate(E.u, d / d.norm()).value : E.u.mean());
    if (!(d.norm() < rp)) throw std::invalid_argument("regraph: new center is not interior to the set");
  }
  Eigen::VectorXd t(q->size());
  const double tmax = d.norm() + 2.0;
  for (Eigen::Index i = 0; i < q->size(); ++i) {
    const Eigen::VectorXd w = q->nodes().row(i).transpose();
    auto residual = [&](double tt, double* deriv) {
      const Eigen::VectorXd y = d + tt * w;
      const double ny = y.norm();
      const Eigen::VectorXd yh = y / ny;
      PointValue pv = evaluate(E.u, yh);
      if (deriv) *deriv = w.dot(yh) - pv.grad.dot(w - w.dot(yh) * yh) / ny;
      return ny - 1.0 - pv.value;
    };
    double lo = 0.0, hi = tmax;
    double tt = 1.0 + evaluate(E.u, w).value - w.dot(d);
    if (!(tt > lo && tt < hi)) tt = 0.5 * (lo + hi);
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      double g1 = 0.0;
      const double g = residual(tt, &g1);
      if (std::abs(g) < 1e-13) {
        ok = true;
        break;
      }
      if (g < 0) lo = tt;
      else hi = tt;
      double nt = tt - g / g1;
      if (!(nt > lo && nt < hi) || !std::isfinite(nt)) nt = 0.5 * (lo + hi);
      if (std::abs(nt - tt) < 1e-15) {
        tt = nt;
        ok = std::abs(residual(tt, nullptr)) < 1e-12;
        break;
      }
      tt = nt;
    }
    if (!ok) throw NumericalError("regraph: per-direction root find did not converge");
    t[i] = tt;
  }
  SpectralCoeffs r = analyze({q, t});
  r.a[0] -= std::sqrt(sphere_area(n));
  return make_set(r, p);
}

NearlySphericalSet recenter(const NearlySphericalSet& E, const Eigen::VectorXd& z) {
  NearlySphericalSet F = regraph(E, z);
  F.center -= z;
  return F;
}

Rescaled rescale_volume(const NearlySphericalSet& E, double target) {
  if (!(target > 0)) throw std::invalid_argument("rescale_volume: target must be positive");
  const double rho = std::pow(target / volume(E), 1.0 / E.dim());
  SpectralCoeffs u = rho * E.u;
  u.a[0] += (rho - 1.0) * std::sqrt(sphere_area(E.dim()));
  return {make_set(u, E.center), rho};
}

double convexity_margin(const NearlySphericalSet& E) { return principal_curvatures(E).minCoeff(); }

CNorms sobolev_c_norms(const SpectralCoeffs& u) {
  GridPtr q = oversampled(*make_grid(u.n, u.L));
  CNorms c;
  c.linf = synthesize(u, q).values.cwiseAbs().maxCoeff();
  c.w1inf = std::sqrt(grad_tau(u, q).comps.rowwise().squaredNorm().maxCoeff());
  HessianField H = hessian_tau(u, q);
  for (Eigen::Index i = 0; i < q->size(); ++i) {
    if (u.n == 2) {
      c.c2 = std::max(c.c2, std::abs(H.comps(i, 0)));
      c.lap = std::max(c.lap, std::abs(H.comps(i, 0)));
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Eigen::Matrix2d(H.at(i)));
      c.c2 = std::max(c.c2, es.eigenvalues().cwiseAbs().maxCoeff());
      c.lap = std::max(c.lap, std::abs(H.comps(i, 0) + H.comps(i, 2)));
    }
  }
  return c;
}

IsoCheck isoperimetric_check(const NearlySphericalSet& E) {
  const int n = E.dim();
  const double V = volume(E);
  const double r = std::pow(V / ball_volume(n), 1.0 / n);
  IsoCheck ic;
  ic.deficit = perimeter(E) - sphere_area(n) * std::pow(r, n - 1);
  ic.asymmetry = symdiff(E, make_ball(n, E.band(), r, barycenter(E)));
  return ic;
}

double volume_fix_constant(const SpectralCoeffs& u, double target) {
  GridPtr q = oversampled(*make_grid(u.n, u.L));
  const Eigen::ArrayXd base = synthesize(u, q).values.array() + 1.0;
  const int n = u.n;
  double c = 0.0;
  for (int it = 0; it < 60; ++it) {
    const Eigen::ArrayXd r = base + c;
    const double V = q->weights().dot(r.pow(n).matrix()) / n;
    const double dV = q->weights().dot(r.pow(n - 1).matrix());
    const double step = (V - target) / dV;
    c -= step;
    if (std::abs(step) < 1e-16) return c;
  }
  if (!std::isfinite(c)) throw NumericalError("volume normalization failed");
  return c;
}

}  // namespace nsph
