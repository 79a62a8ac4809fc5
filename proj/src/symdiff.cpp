#include "nearsphere/symdiff.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace nsph {

namespace {

// Real trigonometric series sum_p c[p] cos(p phi) + s[p] sin(p phi).
struct TrigSeries {
  Eigen::VectorXd c, s;

  double operator()(double phi) const {
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    double cp = 1.0, sp = 0.0, acc = c[0];
    for (Eigen::Index p = 1; p < c.size(); ++p) {
      const double cn = cp * c1 - sp * s1;
      sp = sp * c1 + cp * s1;
      cp = cn;
      acc += c[p] * cp + s[p] * sp;
    }
    return acc;
  }

  // Antiderivative, with the linear term c0 * phi.
  double primitive(double phi) const {
    const double c1 = std::cos(phi), s1 = std::sin(phi);
    double cp = 1.0, sp = 0.0, acc = c[0] * phi;
    for (Eigen::Index p = 1; p < c.size(); ++p) {
      const double cn = cp * c1 - sp * s1;
      sp = sp * c1 + cp * s1;
      cp = cn;
      acc += (c[p] * sp - s[p] * cp) / double(p);
    }
    return acc;
  }
};

// Fourier series of degree cols-1 from M > 2(cols-1) uniform samples.
TrigSeries fit_series(const Eigen::VectorXd& samples, const Eigen::MatrixXd& cosT, const Eigen::MatrixXd& sinT) {
  const double M = double(samples.size());
  TrigSeries t{(cosT.transpose() * samples) * (2.0 / M), (sinT.transpose() * samples) * (2.0 / M)};
  t.c[0] *= 0.5;
  t.s[0] = 0.0;
  return t;
}

// Illinois false position on a sign-changing bracket.
double find_root(const TrigSeries& x, double a, double b, double fa, double fb) {
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    const double c = (a * fb - b * fa) / (fb - fa);
    const double fc = x(c);
    if (fc == 0.0 || std::abs(b - a) < 1e-15) return c;
    if ((fc > 0) == (fb > 0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (a + b);
}

// Exact longitude integral of |rA^n - rB^n| on one ring.
class RingKernel {
 public:
  RingKernel(int n, int L) : n_(n), L_(L), D_(n * L), M_(2 * n * L + 2) {
    cosD_.resize(M_, D_ + 1);
    sinD_.resize(M_, D_ + 1);
    for (int k = 0; k < M_; ++k) {
      const double phi = 2.0 * kPi * k / M_;
      for (int p = 0; p <= D_; ++p) {
        cosD_(k, p) = std::cos(p * phi);
        sinD_(k, p) = std::sin(p * phi);
      }
    }
  }

  double operator()(const Eigen::VectorXd& aC, const Eigen::VectorXd& aS, const Eigen::VectorXd& bC,
                    const Eigen::VectorXd& bS) const {
    const int L = L_, M = M_, n = n_;
    const double twopi = 2.0 * kPi;
    const auto cosL = cosD_.leftCols(L + 1), sinL = sinD_.leftCols(L + 1);
    const Eigen::VectorXd a = cosL * aC + sinL * aS;
    const Eigen::VectorXd b = cosL * bC + sinL * bS;
    const Eigen::VectorXd xs = a.array().pow(n) - b.array().pow(n);
    if (xs.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    TrigSeries x = fit_series(xs, cosD_, sinD_);

    std::vector<double> roots;
    std::vector<int> after;  // sign just after each root
    for (int k = 0; k < M; ++k) {
      const double f0 = xs[k], f1 = xs[(k + 1) % M];
      if ((f0 > 0) != (f1 > 0)) {
        roots.push_back(find_root(x, twopi * k / M, twopi * (k + 1) / M, f0, f1));
        after.push_back(f1 > 0 ? 1 : -1);
      }
    }

    std::vector<double> ia, ib;
    std::vector<int> isgn;
    if (roots.empty()) {
      ia.push_back(0.0);
      ib.push_back(twopi);
      isgn.push_back(xs[0] > 0 ? 1 : -1);
    } else {
      const std::size_t R = roots.size();
      for (std::size_t i = 0; i < R; ++i) {
        ia.push_back(roots[i]);
        ib.push_back(roots[(i + 1) % R] + (i + 1 == R ? twopi : 0.0));
        isgn.push_back(after[i]);
      }
    }

    double val = 0.0;
    for (std::size_t i = 0; i < ia.size(); ++i) val += isgn[i] * (x.primitive(ib[i]) - x.primitive(ia[i]));
    return val;
  }

 private:
  int n_, L_, D_, M_;
  Eigen::MatrixXd cosD_, sinD_;
};

void check_pair(const SpectralCoeffs& rA, const SpectralCoeffs& rB) {
  if (rA.n != rB.n || rA.L != rB.L) throw std::invalid_argument("symdiff_measure: coefficient shape mismatch");
}

}  // namespace

double symdiff_measure(const SpectralCoeffs& rA, const SpectralCoeffs& rB, double rel_tol) {
  check_pair(rA, rB);
  const int n = rA.n, L = rA.L;
  RingKernel kernel(n, L);
  auto ring = [&](const Eigen::VectorXd& z) {
    const RingSeries sa = ring_series(rA, z), sb = ring_series(rB, z);
    Eigen::VectorXd v(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j)
      v[j] = kernel(sa.cosc.row(j).transpose(), sa.sinc.row(j).transpose(), sb.cosc.row(j).transpose(),
                    sb.sinc.row(j).transpose());
    return v;
  };
  if (n == 2) return ring(Eigen::VectorXd::Zero(1))[0] / n;

  // Adaptive Gauss-Kronrod (7, 15) in z = cos(theta); panels are seeded at
  // the Gauss-Legendre resolution of the band so smooth parts converge at once.
  static const double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                               0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                               0.207784955007898468, 0.0};
  static const double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                               0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                               0.204432940075298892, 0.209482141084727828};
  static const double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                               0.417959183673469388};
  struct Panel {
    double a, b, K, err;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto gk = [&](double pa, double pb) {
    const double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
    Eigen::VectorXd z(15);
    for (int i = 0; i < 7; ++i) {
      z[2 * i] = c - h * xk[i];
      z[2 * i + 1] = c + h * xk[i];
    }
    z[14] = c;
    const Eigen::VectorXd f = ring(z);
    double K = wk[7] * f[14], G = wg[3] * f[14];
    for (int i = 0; i < 7; ++i) {
      K += wk[i] * (f[2 * i] + f[2 * i + 1]);
      if (i % 2 == 1) G += wg[i / 2] * (f[2 * i] + f[2 * i + 1]);
    }
    return Panel{pa, pb, K * h, std::abs(K - G) * h};
  };

  // global adaptive subdivision of the worst panel
  std::priority_queue<Panel> heap;
  const int seeds = std::max(4, L / 2);
  double total = 0.0, err = 0.0;
  for (int i = 0; i < seeds; ++i) {
    const Panel p = gk(-1.0 + 2.0 * i / seeds, -1.0 + 2.0 * (i + 1) / seeds);
    total += p.K;
    err += p.err;
    heap.push(p);
  }
  for (int it = 0; it < 20000 && err > std::max(1e-15, rel_tol * std::abs(total)); ++it) {
    const Panel p = heap.top();
    heap.pop();
    const double c = 0.5 * (p.a + p.b);
    const Panel l = gk(p.a, c), r = gk(c, p.b);
    total += l.K + r.K - p.K;
    err += l.err + r.err - p.err;
    heap.push(l);
    heap.push(r);
  }
  return total / n;
}

}  // namespace nsph
