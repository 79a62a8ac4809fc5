#include "nearsphere/varmin.hpp"

#include "nearsphere/symdiff.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nsph {

namespace {

std::shared_ptr<const SynthesisMatrices> cached_matrices(int n, int L, const GridPtr& q) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SynthesisMatrices>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, L}];
  if (!slot) slot = std::make_shared<const SynthesisMatrices>(synthesis_matrices(n, L, q));
  return slot;
}

// Discrete energy in the radius coefficients a (r = sum a_k Y_k).
class Problem {
 public:
  Problem(const NearlySphericalSet& E, int L, double lambda, Profile prof)
      : n_(E.dim()), L_(L), lambda_(lambda), prof_(prof) {
    q_ = oversampled(*make_grid(n_, L_));
    M_ = cached_matrices(n_, L_, q_);
    w_ = q_->weights().array();
    rE_ = synthesize(E.u.resized(L_), q_).values.array() + 1.0;
    rEn_ = rE_.pow(n_);
  }

  struct Eval {
    double J = 0, P = 0, D = 0, V = 0;
    Eigen::VectorXd g, v, dD;
    Eigen::ArrayXd r, x, psi;
    Eigen::MatrixXd H;  // Hessian of J - mu V
  };

  // With s (one dual value per node, |s| <= 1) the Hessian is the
  // primal-dual one: the stiff delta^2/psi^3 factor becomes (1 - s x/psi)/psi.
  Eval eval(const Eigen::VectorXd& a, double delta, bool hess, double mu = 0.0,
            const Eigen::ArrayXd* s = nullptr) const {
    const int n = n_;
    const SynthesisMatrices& M = *M_;
    Eval e;
    e.r = (M.val * a).array();
    const Eigen::ArrayXd& r = e.r;
    Eigen::MatrixXd G(r.size(), n - 1);
    for (int c = 0; c < n - 1; ++c) G.col(c) = M.grad[c] * a;
    const Eigen::ArrayXd g2 = G.rowwise().squaredNorm().array();
    const Eigen::ArrayXd W = (r.square() + g2).sqrt();
    const Eigen::ArrayXd r1 = r.pow(n - 1);

    Eigen::ArrayXd phi, phir, phig;  // phi_g = phig * g
    if (n == 2) {
      phi = W;
      phir = r / W;
      phig = 1.0 / W;
    } else {
      phi = r * W;
      phir = W + r.square() / W;
      phig = r / W;
    }
    const Eigen::ArrayXd x = (r.pow(n) - rEn_) / n;
    const Eigen::ArrayXd psi = (x.square() + delta * delta).sqrt();
    const Eigen::ArrayXd psi1 = x / psi;

    e.P = (w_ * phi).sum();
    e.D = (w_ * psi).sum();
    e.V = (w_ * r.pow(n)).sum() / n;
    e.x = x;
    e.psi = psi;
    const double f = profile_f(e.D, prof_), f1 = profile_f_prime(e.D, prof_);
    e.J = e.P + 2 * lambda_ * f;

    Eigen::VectorXd gP = M.val.transpose() * (w_ * phir).matrix();
    for (int c = 0; c < n - 1; ++c) gP += M.grad[c].transpose() * (w_ * phig * G.col(c).array()).matrix();
    e.dD = M.val.transpose() * (w_ * psi1 * r1).matrix();
    e.v = M.val.transpose() * (w_ * r1).matrix();
    e.g = gP + 2 * lambda_ * f1 * e.dD;
    if (!hess) return e;

    // per-node second derivatives in z = (r, g)
    const int d = n;
    std::vector<std::vector<Eigen::ArrayXd>> Phi(d, std::vector<Eigen::ArrayXd>(d));
    const Eigen::ArrayXd W3 = W.cube();
    if (n == 2) {
      Phi[0][0] = (1.0 - r.square() / W.square()) / W;
      Phi[0][1] = Phi[1][0] = -r * G.col(0).array() / W3;
      Phi[1][1] = (1.0 - g2 / W.square()) / W;
    } else {
      Phi[0][0] = 3 * r / W - r.cube() / W3;
      for (int c = 0; c < 2; ++c) {
        Phi[0][c + 1] = Phi[c + 1][0] = G.col(c).array() * (1.0 / W - r.square() / W3);
        for (int k = 0; k < 2; ++k)
          Phi[c + 1][k + 1] = r * ((c == k ? 1.0 : 0.0) / W - G.col(c).array() * G.col(k).array() / W3);
      }
    }
    const Eigen::ArrayXd psi2 = s ? Eigen::ArrayXd((1.0 - *s * psi1) / psi) : Eigen::ArrayXd(delta * delta / psi.cube());
    const Eigen::ArrayXd& sg = s ? *s : psi1;
    const Eigen::ArrayXd rn2 = r.pow(n - 2);
    Phi[0][0] += 2 * lambda_ * f1 * (psi2 * r1.square() + sg * (n - 1) * rn2) - mu * (n - 1) * rn2;

    auto B = [&](int k) -> const Eigen::MatrixXd& { return k == 0 ? M.val : M.grad[k - 1]; };
    const Eigen::Index N = a.size();
    e.H = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd T(r.size(), N);
    for (int i = 0; i < d; ++i) {
      T.setZero();
      for (int j = 0; j < d; ++j) T += ((w_ * Phi[i][j]).matrix().asDiagonal()) * B(j);
      e.H.noalias() += B(i).transpose() * T;
    }
    e.H += 2 * lambda_ * profile_f_second(e.D, prof_) * e.dD * e.dD.transpose();
    e.H = 0.5 * (e.H + e.H.transpose()).eval();
    return e;
  }

  // J(b) - J(a) without cancellation: near a minimizer the decrease can sit
  // below the round-off of J itself
  double energy_change(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double delta) const {
    const int n = n_;
    const SynthesisMatrices& M = *M_;
    const Eigen::VectorXd da = b - a;
    const Eigen::ArrayXd r0 = (M.val * a).array(), r1 = (M.val * b).array(), dr = (M.val * da).array();
    Eigen::MatrixXd G0(r0.size(), n - 1), G1(r0.size(), n - 1), dG(r0.size(), n - 1);
    for (int c = 0; c < n - 1; ++c) {
      G0.col(c) = M.grad[c] * a;
      G1.col(c) = M.grad[c] * b;
      dG.col(c) = M.grad[c] * da;
    }
    const Eigen::ArrayXd W0 = (r0.square() + G0.rowwise().squaredNorm().array()).sqrt();
    const Eigen::ArrayXd W1 = (r1.square() + G1.rowwise().squaredNorm().array()).sqrt();
    const Eigen::ArrayXd dW =
        (dr * (r0 + r1) + (dG.array() * (G0 + G1).array()).rowwise().sum()) / (W0 + W1);
    const Eigen::ArrayXd dphi = n == 2 ? dW : Eigen::ArrayXd(dr * W1 + r0 * dW);
    // r1^n - r0^n = dr * sum_k r1^k r0^(n-1-k)
    Eigen::ArrayXd fac = Eigen::ArrayXd::Zero(r0.size());
    for (int k = 0; k < n; ++k) fac += r1.pow(k) * r0.pow(n - 1 - k);
    const Eigen::ArrayXd x0 = (r0.pow(n) - rEn_) / n;
    const Eigen::ArrayXd dx = dr * fac / n;
    const Eigen::ArrayXd x1 = x0 + dx;
    const Eigen::ArrayXd p0 = (x0.square() + delta * delta).sqrt(), p1 = (x1.square() + delta * delta).sqrt();
    const double D0 = (w_ * p0).sum();
    const double dD = (w_ * (dx * (x0 + x1) / (p0 + p1))).sum();
    const double df = profile_f_prime(D0 + 0.5 * dD, prof_) * dD;  // midpoint rule, error O(dD^3)
    return (w_ * dphi).sum() + 2 * lambda_ * df;
  }

  Eigen::ArrayXd nodal_x(const Eigen::VectorXd& a) const { return ((M_->val * a).array().pow(n_) - rEn_) / n_; }

  double volume(const Eigen::VectorXd& a) const { return (w_ * (M_->val * a).array().pow(n_)).sum() / n_; }
  double sup_dev(const Eigen::VectorXd& a) const { return ((M_->val * a).array() - 1.0).abs().maxCoeff(); }
  const Eigen::ArrayXd& rE() const { return rE_; }
  const GridPtr& grid() const { return q_; }

 private:
  int n_, L_;
  double lambda_;
  Profile prof_;
  GridPtr q_;
  std::shared_ptr<const SynthesisMatrices> M_;
  Eigen::ArrayXd w_, rE_, rEn_;
};

double residual_of(const Problem::Eval& e, double* mu) {
  const double m = e.g.dot(e.v) / e.v.dot(e.v);
  if (mu) *mu = m;
  return (e.g - m * e.v).norm();
}

}  // namespace

void MinimizeConfig::validate() const {
  if (!(lambda > 0)) throw std::invalid_argument("minimize: lambda must be positive");
  if (!(mollifier_delta >= 1e-10 && mollifier_delta <= 1e-6))
    throw std::invalid_argument("minimize: mollifier_delta must lie in [1e-10, 1e-6]");
  if (max_iters <= 0 || !(grad_tol > 0)) throw std::invalid_argument("minimize: bad iteration controls");
}

MinimizeResult minimize(const NearlySphericalSet& E, const MinimizeConfig& cfg) {
  cfg.validate();
  const int n = E.dim(), L = std::max(cfg.L, E.band());
  Problem prob(E, L, cfg.lambda, cfg.profile);
  const double V0 = ball_volume(n);
  const double s0 = std::sqrt(sphere_area(n));

  Eigen::VectorXd a = SpectralCoeffs::constant(n, L, 1.0).a;  // start from B
  MinimizeResult res;

  // continuation in delta
  const double xscale = std::max(1e-6, (prob.rE().pow(n) - 1.0).abs().maxCoeff() / n);
  std::vector<double> deltas;
  for (double d = 1e-2 * xscale; d > cfg.mollifier_delta; d *= 0.1) deltas.push_back(d);
  deltas.push_back(cfg.mollifier_delta);

  int it = 0;
  double resid = 0.0, mu = 0.0;
  bool failed = false;
  for (std::size_t stage = 0; stage < deltas.size() && !failed; ++stage) {
    const double delta = deltas[stage];
    const bool last = stage + 1 == deltas.size();
    const double tol = last ? cfg.grad_tol : std::max(cfg.grad_tol, 1e-6);
    Eigen::ArrayXd s;
    for (;;) {
      Problem::Eval e = prob.eval(a, delta, false);
      resid = residual_of(e, &mu);
      res.trace.push_back({it, e.J, e.P, e.J - e.P, res.trace.empty() ? 0.0 : res.trace.back().step, resid, delta});
      if (resid <= tol) break;
      if (it >= cfg.max_iters) {
        res.diagnostic = "iteration limit reached";
        failed = true;
        break;
      }
      ++it;
      if (s.size() == 0) s = e.x / e.psi;
      e = prob.eval(a, delta, true, mu, &s);

      const Eigen::Index N = a.size();
      const Eigen::MatrixXd Q = e.v.householderQr().householderQ();
      const Eigen::MatrixXd Z = Q.rightCols(N - 1);
      const Eigen::MatrixXd Hr = Z.transpose() * e.H * Z;
      const Eigen::VectorXd gr = Z.transpose() * e.g;
      double tau = 0.0;
      Eigen::VectorXd y;
      for (int k = 0; k < 60; ++k) {
        Eigen::LLT<Eigen::MatrixXd> llt(Hr + tau * Eigen::MatrixXd::Identity(N - 1, N - 1));
        if (llt.info() == Eigen::Success) {
          y = -llt.solve(gr);
          if (y.allFinite()) break;
        }
        tau = tau == 0.0 ? 1e-10 * std::max(1.0, Hr.diagonal().cwiseAbs().maxCoeff()) : 4 * tau;
      }
      const Eigen::VectorXd dir = Z * y;
      const double slope = e.g.dot(dir);

      double alpha = 1.0;
      bool accepted = false;
      for (int k = 0; k < 50; ++k, alpha *= 0.5) {
        Eigen::VectorXd at = a + alpha * dir;
        const double Vt = prob.volume(at);
        if (!(Vt > 0)) continue;
        at *= std::pow(V0 / Vt, 1.0 / n);
        if (prob.sup_dev(at) > 0.4) continue;
        const Problem::Eval et = prob.eval(at, delta, false);
        // once the predicted decrease is below the round-off of the volume
        // rescaling, J cannot rank trial points and the residual does instead
        const bool flat = -slope < 1e-12 * std::abs(e.J);
        const bool newton_ok = residual_of(et, nullptr) < (alpha == 1.0 ? 0.5 : 1.0 - 1e-4) * resid;
        if (flat ? newton_ok : prob.energy_change(a, at, delta) <= 1e-4 * alpha * slope) {
          const Eigen::ArrayXd dx = prob.nodal_x(at) - e.x;
          s += alpha * (e.x / e.psi - s) + (1.0 - s * e.x / e.psi) / e.psi * dx;
          s = s.max(-1.0).min(1.0);
          a = at;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // a direction that cannot decrease J at round-off level ends this stage
        if (resid <= 1e3 * tol) break;
        res.diagnostic = "line search failed";
        failed = true;
        break;
      }
      res.trace.back().step = alpha;
    }
  }

  SpectralCoeffs u(n, L);
  u.a = a;
  u.a[0] -= s0;
  res.H = make_set(u, E.center);
  res.iterations = it;
  const ELResidual el = el_residual(res.H, E, cfg.lambda, cfg.mollifier_delta, cfg.profile);
  res.el_residual = el.galerkin;
  res.el_residual_pointwise = el.pointwise;
  res.mu_hat = el.mu_hat;
  res.converged = !failed && el.galerkin <= cfg.grad_tol;
  if (!failed && !res.converged && res.diagnostic.empty()) res.diagnostic = "residual above tolerance";
  res.energy_discrete = prob.eval(a, cfg.mollifier_delta, false).J;
  res.perimeter = perimeter(res.H);
  res.symdiff = symdiff(E, res.H);
  res.energy = res.perimeter + 2 * cfg.lambda * profile_f(res.symdiff, cfg.profile);
  return res;
}

ELResidual el_residual(const NearlySphericalSet& H, const NearlySphericalSet& E, double lambda, double delta,
                       Profile profile) {
  if (H.dim() != E.dim()) throw std::invalid_argument("el_residual: dimension mismatch");
  if ((H.center - E.center).norm() > 0) throw std::invalid_argument("el_residual: sets must share a center");
  const int L = std::max(H.band(), E.band());
  const int n = H.dim();
  Problem prob(E, L, lambda, profile);
  Eigen::VectorXd a = H.radius().resized(L).a;
  const Problem::Eval e = prob.eval(a, delta, false);
  ELResidual out;
  out.galerkin = residual_of(e, &out.mu_hat);

  // pointwise form on the boundary, with the sign of r_H - r_E
  const NearlySphericalSet HL = make_set(H.u.resized(L), H.center);
  const CurvatureField cf = mean_curvature(HL);
  const double fp = profile_f_prime(symdiff(E, HL), profile);
  const Eigen::ArrayXd chi = (e.r - prob.rE()).sign();
  const Eigen::ArrayXd val = cf.S_nodal.values.array() + 2 * lambda * fp * chi;
  const GridPtr& q = prob.grid();
  const Eigen::ArrayXd r = e.r;
  Eigen::ArrayXd bw(q->size());
  {
    const TangentField g = grad_tau(HL.u, q);
    bw = q->weights().array() * r.pow(n - 2) * (r.square() + g.comps.rowwise().squaredNorm().array()).sqrt();
  }
  const double m = (bw * val).sum() / bw.sum();
  out.pointwise = std::sqrt((bw * (val - m).square()).sum());
  return out;
}

double penalized_energy(const NearlySphericalSet& G, const NearlySphericalSet& E, double lambda, Profile profile) {
  return perimeter(G) + 2 * lambda * profile_f(symdiff(E, G), profile);
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open trace file " + path);
  os.precision(17);
  os << "iter,energy,perimeter_term,penalty_term,step,residual,delta\n";
  for (const auto& t : trace)
    os << t.iter << ',' << t.energy << ',' << t.perimeter << ',' << t.penalty << ',' << t.step << ','
       << t.residual << ',' << t.delta << '\n';
}

}  // namespace nsph
