#include "nearsphere/sphgrid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

namespace nsph {

namespace {

void check_dim(int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("unsupported dimension n=" + std::to_string(n));
}

inline int tri(int l, int m) { return l * (l + 1) / 2 + m; }

// Normalized associated Legendre functions Pbar_l^m(cos theta) with
// int_{S^2} (Pbar_l^m)^2 (cos m phi)^2 * (m>0 ? 2 : 1) = 1, plus theta
// derivatives. Arrays are indexed by tri(l, m).
struct Legendre {
  int L;
  std::vector<double> P, dP, d2P;

  explicit Legendre(int L_) : L(L_), P(tri(L_, L_) + 1), dP(P.size()), d2P(P.size()) {}

  void eval(double x, double s, bool derivs = true, bool second = false) {
    P[0] = 1.0 / std::sqrt(4.0 * kPi);
    for (int m = 1; m <= L; ++m)
      P[tri(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * P[tri(m - 1, m - 1)];
    for (int m = 0; m < L; ++m) {
      P[tri(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * P[tri(m, m)];
      for (int l = m + 2; l <= L; ++l) {
        const double ll = double(l) * l, mm = double(m) * m;
        const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
        const double b = std::sqrt((double(l - 1) * (l - 1) - mm) / (4.0 * double(l - 1) * (l - 1) - 1.0));
        P[tri(l, m)] = a * (x * P[tri(l - 1, m)] - b * P[tri(l - 2, m)]);
      }
    }
    if (!derivs) return;
    for (int l = 0; l <= L; ++l) {
      for (int m = 0; m <= l; ++m) {
        double lower = 0.0;
        if (l > m) {
          const double c = std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) / (2.0 * l - 1.0));
          lower = c * P[tri(l - 1, m)];
        }
        dP[tri(l, m)] = (l * x * P[tri(l, m)] - lower) / s;
        if (second)
          d2P[tri(l, m)] = -(x / s) * dP[tri(l, m)] -
                           (double(l) * (l + 1) - double(m) * m / (s * s)) * P[tri(l, m)];
      }
    }
  }
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int N, std::vector<double>& x, std::vector<double>& w) {
  x.assign(N, 0.0);
  w.assign(N, 0.0);
  for (int i = 0; i < N; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (N + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= N; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (N == 1) p0 = 1.0, p1 = z;
      dp = N * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= N; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = N * (z * p1 - p0) / (z * z - 1.0);
    }
    x[N - 1 - i] = z;
    w[N - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

struct TrigTable {
  Eigen::MatrixXd c, s;  // nlon x (L+1)
  TrigTable(const SphereGrid& g, int L) : c(g.ring_size(), L + 1), s(g.ring_size(), L + 1) {
    for (int k = 0; k < g.ring_size(); ++k) {
      const double phi = g.longitude(k);
      for (int m = 0; m <= L; ++m) {
        c(k, m) = std::cos(m * phi);
        s(k, m) = std::sin(m * phi);
      }
    }
  }
};

void check_match(const SpectralCoeffs& c, const SphereGrid& g) {
  if (c.n != g.dim()) throw std::invalid_argument("grid/coefficient dimension mismatch");
  if (c.a.size() != num_coeffs(c.n, c.L)) throw std::invalid_argument("coefficient vector has wrong length");
}

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);
const double kInvSqrtPi = 1.0 / std::sqrt(kPi);
const double kSqrt2 = std::sqrt(2.0);

// Per-ring longitude series built from a caller-chosen Legendre table.
enum class Deriv { None, Theta, ThetaTheta };

void ring_coeffs(const SpectralCoeffs& c, const std::vector<double>& table, int Lmax,
                 Eigen::Ref<Eigen::VectorXd> C, Eigen::Ref<Eigen::VectorXd> S) {
  C.setZero();
  S.setZero();
  for (int m = 0; m <= Lmax; ++m) {
    const double f = m == 0 ? 1.0 : kSqrt2;
    double cc = 0.0, ss = 0.0;
    for (int l = m; l <= c.L; ++l) {
      const double p = table[tri(l, m)];
      cc += c(l, m) * p;
      if (m > 0) ss += c(l, -m) * p;
    }
    C[m] = f * cc;
    S[m] = f * ss;
  }
}

}  // namespace

double sphere_area(int n) {
  check_dim(n);
  return n == 2 ? 2.0 * kPi : 4.0 * kPi;
}

double ball_volume(int n) {
  check_dim(n);
  return n == 2 ? kPi : 4.0 * kPi / 3.0;
}

int num_coeffs(int n, int L) {
  check_dim(n);
  return n == 2 ? 2 * L + 1 : (L + 1) * (L + 1);
}

int coeff_index(int n, int l, int m) {
  if (n == 2) {
    if (l == 0) return 0;
    return m < 0 ? 2 * l - 1 : 2 * l;
  }
  return l * l + l + m;
}

int coeff_degree(int n, int idx) {
  if (n == 2) return (idx + 1) / 2;
  return int(std::floor(std::sqrt(double(idx) + 0.5)));
}

SphereGrid::SphereGrid(int n, int band, int resolution) : n_(n), band_(band), res_(resolution) {
  check_dim(n);
  if (band < 4 || band > 512) throw std::invalid_argument("band limit out of range: " + std::to_string(band));
  if (resolution < band) throw std::invalid_argument("resolution below band limit");
  nlon_ = 2 * res_ + 2;
  if (n == 2) {
    ring_cos_ = {0.0};
    ring_sin_ = {1.0};
    ring_w_ = {1.0};
  } else {
    std::vector<double> x, w;
    gauss_legendre(res_ + 1, x, w);
    ring_cos_ = x;
    ring_w_ = w;
    ring_sin_.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) ring_sin_[j] = std::sqrt((1.0 - x[j]) * (1.0 + x[j]));
  }
  const Eigen::Index N = Eigen::Index(ring_cos_.size()) * nlon_;
  nodes_.resize(N, n);
  weights_.resize(N);
  const double dphi = 2.0 * kPi / nlon_;
  for (int j = 0; j < rings(); ++j) {
    for (int k = 0; k < nlon_; ++k) {
      const Eigen::Index i = Eigen::Index(j) * nlon_ + k;
      const double phi = longitude(k);
      if (n == 2) {
        nodes_(i, 0) = std::cos(phi);
        nodes_(i, 1) = std::sin(phi);
      } else {
        nodes_(i, 0) = ring_sin_[j] * std::cos(phi);
        nodes_(i, 1) = ring_sin_[j] * std::sin(phi);
        nodes_(i, 2) = ring_cos_[j];
      }
      weights_[i] = ring_w_[j] * dphi;
    }
  }
}

double SphereGrid::longitude(int k) const { return 2.0 * kPi * k / nlon_; }

GridPtr make_grid(int n, int L, int resolution) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, GridPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, L, resolution);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto g = std::make_shared<const SphereGrid>(n, L, resolution);
  cache.emplace(key, g);
  return g;
}

GridPtr make_grid(int n, int L) { return make_grid(n, L, L); }

GridPtr oversampled(const SphereGrid& g) { return make_grid(g.dim(), g.band(), (3 * g.band() + 1) / 2); }

SpectralCoeffs SpectralCoeffs::constant(int n, int L, double c) {
  SpectralCoeffs out(n, L);
  out.a[0] = c * std::sqrt(sphere_area(n));
  return out;
}

Eigen::VectorXd SpectralCoeffs::eigenvalues() const {
  Eigen::VectorXd ev(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) ev[i] = sphere_eigenvalue(n, coeff_degree(n, int(i)));
  return ev;
}

SpectralCoeffs SpectralCoeffs::resized(int newL) const {
  SpectralCoeffs out(n, newL);
  const Eigen::Index k = std::min(out.a.size(), a.size());
  out.a.head(k) = a.head(k);
  return out;
}

double SpectralCoeffs::mean() const { return a[0] / std::sqrt(sphere_area(n)); }

SpectralCoeffs operator+(const SpectralCoeffs& x, const SpectralCoeffs& y) {
  if (x.n != y.n || x.L != y.L) throw std::invalid_argument("coefficient shape mismatch");
  SpectralCoeffs r = x;
  r.a += y.a;
  return r;
}

SpectralCoeffs operator-(const SpectralCoeffs& x, const SpectralCoeffs& y) {
  if (x.n != y.n || x.L != y.L) throw std::invalid_argument("coefficient shape mismatch");
  SpectralCoeffs r = x;
  r.a -= y.a;
  return r;
}

SpectralCoeffs operator*(double s, const SpectralCoeffs& x) {
  SpectralCoeffs r = x;
  r.a *= s;
  return r;
}

Eigen::MatrixXd HessianField::at(Eigen::Index i) const {
  if (comps.cols() == 1) return Eigen::MatrixXd::Constant(1, 1, comps(i, 0));
  Eigen::Matrix2d h;
  h << comps(i, 0), comps(i, 1), comps(i, 1), comps(i, 2);
  return h;
}

RingSeries ring_series(const SpectralCoeffs& c, const SphereGrid& g) {
  check_match(c, g);
  Eigen::VectorXd z(g.rings());
  for (int j = 0; j < g.rings(); ++j) z[j] = g.ring_cos(j);
  return ring_series(c, z);
}

RingSeries ring_series(const SpectralCoeffs& c, const Eigen::VectorXd& z) {
  check_dim(c.n);
  const int L = c.L;
  RingSeries rs{Eigen::MatrixXd::Zero(z.size(), L + 1), Eigen::MatrixXd::Zero(z.size(), L + 1)};
  if (c.n == 2) {
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      rs.cosc(j, 0) = c.a[0] * kInvSqrt2Pi;
      for (int l = 1; l <= L; ++l) {
        rs.cosc(j, l) = c(l, l) * kInvSqrtPi;
        rs.sinc(j, l) = c(l, -l) * kInvSqrtPi;
      }
    }
    return rs;
  }
  Legendre leg(L);
  Eigen::VectorXd C(L + 1), S(L + 1);
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    leg.eval(z[j], std::sqrt(std::max(0.0, 1.0 - z[j] * z[j])), false);
    ring_coeffs(c, leg.P, L, C, S);
    rs.cosc.row(j) = C.transpose();
    rs.sinc.row(j) = S.transpose();
  }
  return rs;
}

SpectralCoeffs ring_project(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const SphereGrid& g) {
  Eigen::VectorXd z(g.rings()), w(g.rings());
  for (int j = 0; j < g.rings(); ++j) {
    z[j] = g.ring_cos(j);
    w[j] = g.ring_weight(j);
  }
  return ring_project(A, B, g.dim(), g.band(), z, w);
}

SpectralCoeffs ring_project(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, int n, int L,
                            const Eigen::VectorXd& z, const Eigen::VectorXd& w) {
  check_dim(n);
  SpectralCoeffs out(n, L);
  if (n == 2) {
    out.a[0] = w.dot(A.col(0)) * kInvSqrt2Pi;
    for (int l = 1; l <= L; ++l) {
      out(l, l) = w.dot(A.col(l)) * kInvSqrtPi;
      out(l, -l) = w.dot(B.col(l)) * kInvSqrtPi;
    }
    return out;
  }
  Legendre leg(L);
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    leg.eval(z[j], std::sqrt(std::max(0.0, 1.0 - z[j] * z[j])), false);
    for (int m = 0; m <= L; ++m) {
      const double f = w[j] * (m == 0 ? 1.0 : kSqrt2);
      for (int l = m; l <= L; ++l) {
        const double p = f * leg.P[tri(l, m)];
        out(l, m) += p * A(j, m);
        if (m > 0) out(l, -m) += p * B(j, m);
      }
    }
  }
  return out;
}

namespace {

// Longitude integrals int f cos(m phi) dphi per ring, by the trapezoid rule.
void ring_transform(const SphereGrid& g, const Eigen::VectorXd& v, int L, const TrigTable& trig,
                    Eigen::MatrixXd& A, Eigen::MatrixXd& B) {
  const int nl = g.ring_size();
  const double dphi = 2.0 * kPi / nl;
  A.resize(g.rings(), L + 1);
  B.resize(g.rings(), L + 1);
  for (int j = 0; j < g.rings(); ++j) {
    const auto seg = v.segment(Eigen::Index(j) * nl, nl);
    A.row(j) = dphi * (seg.transpose() * trig.c);
    B.row(j) = dphi * (seg.transpose() * trig.s);
  }
}

}  // namespace

SpectralCoeffs analyze(const SphericalField& f) {
  const SphereGrid& g = *f.grid;
  if (f.values.size() != g.size()) throw std::invalid_argument("field sample count does not match grid");
  TrigTable trig(g, g.band());
  Eigen::MatrixXd A, B;
  ring_transform(g, f.values, g.band(), trig, A, B);
  return ring_project(A, B, g);
}

namespace {

struct RingEval {
  Eigen::MatrixXd f, ft, ftt;  // rings x (L+1) cos and sin series for value, d_theta, d_theta^2
  Eigen::MatrixXd fs, fts, ftts;
};

// Value and theta-derivative longitude series on every ring.
RingEval ring_eval(const SpectralCoeffs& c, const SphereGrid& g, bool first, bool second) {
  const int L = c.L;
  RingEval r;
  r.f = Eigen::MatrixXd::Zero(g.rings(), L + 1);
  r.fs = r.f;
  r.ft = r.f;
  r.fts = r.f;
  r.ftt = r.f;
  r.ftts = r.f;
  if (c.n == 2) {
    RingSeries rs = ring_series(c, g);
    r.f = rs.cosc;
    r.fs = rs.sinc;
    return r;
  }
  Legendre leg(L);
  Eigen::VectorXd C(L + 1), S(L + 1);
  for (int j = 0; j < g.rings(); ++j) {
    leg.eval(g.ring_cos(j), g.ring_sin(j), first || second, second);
    ring_coeffs(c, leg.P, L, C, S);
    r.f.row(j) = C.transpose();
    r.fs.row(j) = S.transpose();
    if (first || second) {
      ring_coeffs(c, leg.dP, L, C, S);
      r.ft.row(j) = C.transpose();
      r.fts.row(j) = S.transpose();
    }
    if (second) {
      ring_coeffs(c, leg.d2P, L, C, S);
      r.ftt.row(j) = C.transpose();
      r.ftts.row(j) = S.transpose();
    }
  }
  return r;
}

}  // namespace

SphericalField synthesize(const SpectralCoeffs& c, const GridPtr& grid) {
  const SphereGrid& g = *grid;
  check_match(c, g);
  RingEval r = ring_eval(c, g, false, false);
  TrigTable trig(g, c.L);
  const int nl = g.ring_size();
  SphericalField out{grid, Eigen::VectorXd(g.size())};
  for (int j = 0; j < g.rings(); ++j)
    out.values.segment(Eigen::Index(j) * nl, nl) = trig.c * r.f.row(j).transpose() + trig.s * r.fs.row(j).transpose();
  return out;
}

TangentField grad_tau(const SpectralCoeffs& c, const GridPtr& grid) {
  const SphereGrid& g = *grid;
  check_match(c, g);
  const int L = c.L;
  RingEval r = ring_eval(c, g, true, false);
  TrigTable trig(g, L);
  const int nl = g.ring_size();
  Eigen::VectorXd mvec = Eigen::VectorXd::LinSpaced(L + 1, 0.0, double(L));
  TangentField out{grid, Eigen::MatrixXd(g.size(), g.dim() - 1)};
  for (int j = 0; j < g.rings(); ++j) {
    const Eigen::VectorXd Cm = r.f.row(j).transpose().cwiseProduct(mvec);
    const Eigen::VectorXd Sm = r.fs.row(j).transpose().cwiseProduct(mvec);
    const Eigen::VectorXd fphi = trig.c * Sm - trig.s * Cm;
    if (g.dim() == 2) {
      out.comps.col(0) = fphi;
    } else {
      const auto rows = Eigen::seqN(Eigen::Index(j) * nl, nl);
      out.comps(rows, 0) = trig.c * r.ft.row(j).transpose() + trig.s * r.fts.row(j).transpose();
      out.comps(rows, 1) = fphi / g.ring_sin(j);
    }
  }
  return out;
}

TangentField grad_tau(const SphericalField& f) { return grad_tau(analyze(f), f.grid); }

HessianField hessian_tau(const SpectralCoeffs& c, const GridPtr& grid) {
  const SphereGrid& g = *grid;
  check_match(c, g);
  const int L = c.L;
  RingEval r = ring_eval(c, g, true, true);
  TrigTable trig(g, L);
  const int nl = g.ring_size();
  Eigen::VectorXd mvec = Eigen::VectorXd::LinSpaced(L + 1, 0.0, double(L));
  Eigen::VectorXd m2 = mvec.cwiseProduct(mvec);
  HessianField out{grid, Eigen::MatrixXd(g.size(), g.dim() == 2 ? 1 : 3)};
  for (int j = 0; j < g.rings(); ++j) {
    const Eigen::VectorXd C = r.f.row(j).transpose(), S = r.fs.row(j).transpose();
    const Eigen::VectorXd fpp = -(trig.c * C.cwiseProduct(m2) + trig.s * S.cwiseProduct(m2));
    if (g.dim() == 2) {
      out.comps.col(0) = fpp;
      continue;
    }
    const double s = g.ring_sin(j), x = g.ring_cos(j);
    const Eigen::VectorXd Ct = r.ft.row(j).transpose(), St = r.fts.row(j).transpose();
    const Eigen::VectorXd fphi = trig.c * S.cwiseProduct(mvec) - trig.s * C.cwiseProduct(mvec);
    const Eigen::VectorXd ftphi = trig.c * St.cwiseProduct(mvec) - trig.s * Ct.cwiseProduct(mvec);
    const Eigen::VectorXd ft = trig.c * Ct + trig.s * St;
    const Eigen::VectorXd ftt = trig.c * r.ftt.row(j).transpose() + trig.s * r.ftts.row(j).transpose();
    const auto rows = Eigen::seqN(Eigen::Index(j) * nl, nl);
    out.comps(rows, 0) = ftt;
    out.comps(rows, 1) = (ftphi - (x / s) * fphi) / s;
    out.comps(rows, 2) = fpp / (s * s) + (x / s) * ft;
  }
  return out;
}

SpectralCoeffs div_tau(const TangentField& v) {
  const SphereGrid& g = *v.grid;
  const int L = g.band();
  if (v.comps.rows() != g.size() || v.comps.cols() != g.dim() - 1)
    throw std::invalid_argument("tangent field shape does not match grid");
  TrigTable trig(g, L);
  SpectralCoeffs out(g.dim(), L);
  if (g.dim() == 2) {
    Eigen::MatrixXd A, B;
    ring_transform(g, v.comps.col(0), L, trig, A, B);
    for (int l = 1; l <= L; ++l) {
      out(l, l) = l * B(0, l) * kInvSqrtPi;
      out(l, -l) = -l * A(0, l) * kInvSqrtPi;
    }
    return out;
  }
  Eigen::MatrixXd At, Bt, Ap, Bp;
  ring_transform(g, v.comps.col(0), L, trig, At, Bt);
  ring_transform(g, v.comps.col(1), L, trig, Ap, Bp);
  Legendre leg(L);
  for (int j = 0; j < g.rings(); ++j) {
    leg.eval(g.ring_cos(j), g.ring_sin(j), true);
    const double w = g.ring_weight(j), s = g.ring_sin(j);
    for (int m = 0; m <= L; ++m) {
      const double f = w * (m == 0 ? 1.0 : kSqrt2);
      for (int l = m; l <= L; ++l) {
        const double dp = leg.dP[tri(l, m)], pm = m * leg.P[tri(l, m)] / s;
        out(l, m) -= f * (dp * At(j, m) - pm * Bp(j, m));
        if (m > 0) out(l, -m) -= f * (dp * Bt(j, m) + pm * Ap(j, m));
      }
    }
  }
  return out;
}

SpectralCoeffs laplace_tau(const SpectralCoeffs& c) {
  SpectralCoeffs out = c;
  out.a = -c.eigenvalues().cwiseProduct(c.a);
  return out;
}

SphericalField laplace_tau(const SphericalField& f) { return synthesize(laplace_tau(analyze(f)), f.grid); }

double integrate(const SphereGrid& g, const Eigen::VectorXd& values) { return g.weights().dot(values); }
double integrate(const SphericalField& f) { return integrate(*f.grid, f.values); }

PointValue evaluate(const SpectralCoeffs& c, const Eigen::VectorXd& dir) {
  const int L = c.L;
  PointValue pv;
  pv.grad = Eigen::VectorXd::Zero(c.n);
  if (c.n == 2) {
    const double phi = std::atan2(dir[1], dir[0]);
    double f = c.a[0] * kInvSqrt2Pi, fp = 0.0;
    for (int l = 1; l <= L; ++l) {
      const double cl = std::cos(l * phi), sl = std::sin(l * phi);
      f += kInvSqrtPi * (c(l, l) * cl + c(l, -l) * sl);
      fp += kInvSqrtPi * l * (c(l, -l) * cl - c(l, l) * sl);
    }
    pv.value = f;
    pv.grad << -std::sin(phi) * fp, std::cos(phi) * fp;
    return pv;
  }
  const double nrm = dir.norm();
  double x = dir[2] / nrm;
  double s = std::hypot(dir[0], dir[1]) / nrm;
  if (s < 1e-12) {
    s = 1e-12;
    x = x > 0 ? std::sqrt(1.0 - s * s) : -std::sqrt(1.0 - s * s);
  }
  const double phi = std::atan2(dir[1], dir[0]);
  Legendre leg(L);
  leg.eval(x, s, true);
  double f = 0.0, ft = 0.0, fphi = 0.0;
  for (int m = 0; m <= L; ++m) {
    const double fac = m == 0 ? 1.0 : kSqrt2;
    const double cm = std::cos(m * phi), sm = std::sin(m * phi);
    for (int l = m; l <= L; ++l) {
      const double p = fac * leg.P[tri(l, m)], dp = fac * leg.dP[tri(l, m)];
      const double ac = c(l, m), as = m > 0 ? c(l, -m) : 0.0;
      f += p * (ac * cm + as * sm);
      ft += dp * (ac * cm + as * sm);
      fphi += p * m * (as * cm - ac * sm);
    }
  }
  pv.value = f;
  Eigen::Vector3d et(x * std::cos(phi), x * std::sin(phi), -s), ep(-std::sin(phi), std::cos(phi), 0.0);
  pv.grad = ft * et + (fphi / s) * ep;
  return pv;
}

Eigen::MatrixXd tangent_frame(const SphereGrid& g, Eigen::Index i) {
  const int j = int(i / g.ring_size());
  const double phi = g.longitude(int(i % g.ring_size()));
  if (g.dim() == 2) {
    Eigen::MatrixXd e(2, 1);
    e << -std::sin(phi), std::cos(phi);
    return e;
  }
  const double x = g.ring_cos(j), s = g.ring_sin(j);
  Eigen::MatrixXd e(3, 2);
  e << x * std::cos(phi), -std::sin(phi), x * std::sin(phi), std::cos(phi), -s, 0.0;
  return e;
}

double harmonic(int n, int l, int m, const Eigen::VectorXd& dir) {
  SpectralCoeffs c(n, std::max(l, 1));
  c(l, m) = 1.0;
  return evaluate(c, dir).value;
}

SynthesisMatrices synthesis_matrices(int n, int L, const GridPtr& grid) {
  const int N = num_coeffs(n, L);
  SynthesisMatrices m{Eigen::MatrixXd(grid->size(), N), std::vector<Eigen::MatrixXd>(n - 1, Eigen::MatrixXd(grid->size(), N))};
  SpectralCoeffs e(n, L);
  for (int k = 0; k < N; ++k) {
    e.a.setZero();
    e.a[k] = 1.0;
    m.val.col(k) = synthesize(e, grid).values;
    const TangentField g = grad_tau(e, grid);
    for (int c = 0; c < n - 1; ++c) m.grad[c].col(k) = g.comps.col(c);
  }
  return m;
}

}  // namespace nsph
