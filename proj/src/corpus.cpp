#include "nearsphere/corpus.hpp"

#include "nearsphere/counterex.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nsph {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::string entry_id(CorpusKind k, int i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d", to_string(k).c_str(), i);
  return buf;
}

Eigen::Matrix3d random_rotation(CounterRng& rng) {
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return q.toRotationMatrix();
}

// Rescales a shape family s -> u(s) until sigma_bound hits target (it is
// close to linear in s), then nudges below the bound if round-off overshoots.
template <class Make>
NearlySphericalSet fit_sigma(Make&& make, double target, double bound) {
  // small pilot scale, shrunk until the set is admissible at all
  double s = 0.01;
  NearlySphericalSet E;
  for (int it = 0;; ++it) {
    try {
      E = make_set(make(s));
      break;
    } catch (const std::invalid_argument&) {
      if (it == 30) throw;
      s *= 0.1;
    }
  }
  for (int it = 0; it < 20 && std::abs(E.sigma_bound - target) > 1e-6 * target; ++it) {
    s *= target / E.sigma_bound;
    E = make_set(make(s));
  }
  for (int it = 0; it < 20 && E.sigma_bound > bound; ++it) {
    s *= 0.999 * bound / E.sigma_bound;
    E = make_set(make(s));
  }
  if (E.sigma_bound > bound) throw NumericalError("corpus: cannot meet the amplitude bound");
  return E;
}

Polygon star_polygon(CounterRng& rng, const CorpusSpec& spec) {
  const int m = spec.min_vertices + int(rng.uniform() * (spec.max_vertices - spec.min_vertices + 1));
  Eigen::Matrix2Xd v(2, m);
  for (int i = 0; i < m; ++i) {
    const double t = 2 * kPi * (i + 0.8 * rng.uniform()) / m;
    const double r = 1.0 + spec.sigma * rng.uniform(-1.0, 1.0);
    v.col(i) << r * std::cos(t), r * std::sin(t);
  }
  return make_polygon(v);
}

Polygon notched_polygon(CounterRng& rng) {
  const double W = rng.uniform(1.0, 3.0), H = rng.uniform(0.5, 1.5);
  const int k = 1 + int(rng.uniform() * 3);
  std::vector<Eigen::Vector2d> pts{{0, 0}, {W, 0}, {W, H}};
  const double x0 = 0.1 * W, slot = 0.8 * W / k;
  for (int j = k - 1; j >= 0; --j) {
    const double width = slot * rng.uniform(0.3, 0.8);
    const double left = x0 + j * slot + (slot - width) * rng.uniform();
    const double depth = H * rng.uniform(0.2, 0.8);
    pts.push_back({left + width, H});
    pts.push_back({left + width, H - depth});
    pts.push_back({left, H - depth});
    pts.push_back({left, H});
  }
  pts.push_back({0, H});
  Eigen::Matrix2Xd v(2, Eigen::Index(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) v.col(Eigen::Index(i)) = pts[i];
  return make_polygon(v);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::next() { return splitmix64(seed_ + kGolden * ((stream_ << 32) + k_++)); }

double CounterRng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * kPi * u2);
}

std::string to_string(CorpusKind k) {
  switch (k) {
    case CorpusKind::RandomBandlimited: return "random_bandlimited";
    case CorpusKind::SingleMode: return "single_mode";
    case CorpusKind::Ellipsoidal: return "ellipsoidal";
    case CorpusKind::Counterexample: return "counterexample";
    case CorpusKind::PlanarStar: return "planar_star";
    case CorpusKind::PlanarNotched: return "planar_notched";
  }
  return "?";
}

CorpusKind corpus_kind_from_string(const std::string& s) {
  for (auto k : {CorpusKind::RandomBandlimited, CorpusKind::SingleMode, CorpusKind::Ellipsoidal,
                 CorpusKind::Counterexample, CorpusKind::PlanarStar, CorpusKind::PlanarNotched})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown corpus kind '" + s + "'");
}

void CorpusSpec::validate() const {
  if (count < 0) throw std::invalid_argument("corpus: count must be >= 0");
  if (!(sigma > 0 && sigma <= 0.4)) throw std::invalid_argument("corpus: sigma must lie in (0, 0.4]");
  if (n != 2 && n != 3) throw std::invalid_argument("corpus: n must be 2 or 3");
  if (L < 2 && !planar()) throw std::invalid_argument("corpus: band limit too small");
  if ((kind == CorpusKind::Ellipsoidal || kind == CorpusKind::Counterexample) && n != 3)
    throw std::invalid_argument("corpus: this kind needs n = 3");
  if (kind == CorpusKind::SingleMode && (ell < 0 || ell > L || std::abs(m) > ell))
    throw std::invalid_argument("corpus: single mode outside the band");
  if (min_vertices < 3 || max_vertices < min_vertices) throw std::invalid_argument("corpus: bad vertex range");
  if (!(decay >= 0)) throw std::invalid_argument("corpus: decay must be >= 0");
}

SpectralCoeffs normalize_volume(const SpectralCoeffs& u) {
  SpectralCoeffs v = u;
  v.a[0] += volume_fix_constant(u, ball_volume(u.n)) * std::sqrt(sphere_area(u.n));
  return v;
}

double ellipsoid_radius(const Eigen::Vector3d& axes, const Eigen::Matrix3d& R, const Eigen::Vector3d& w) {
  return 1.0 / (R.transpose() * w).cwiseQuotient(axes).norm();
}

std::vector<CorpusEntry> generate(const CorpusSpec& spec) {
  spec.validate();
  std::vector<CorpusEntry> out;
  const int count = (spec.kind == CorpusKind::SingleMode || spec.kind == CorpusKind::Counterexample) ? 1 : spec.count;
  for (int i = 0; i < count; ++i) {
    CounterRng rng(spec.seed, std::uint64_t(i));
    CorpusEntry e;
    e.index = i;
    e.id = entry_id(spec.kind, i);
    const double target = spec.sigma * rng.uniform(0.5, 1.0);
    switch (spec.kind) {
      case CorpusKind::RandomBandlimited: {
        SpectralCoeffs v(spec.n, spec.L);
        for (Eigen::Index k = 1; k < v.a.size(); ++k)
          v.a[k] = rng.normal() * std::pow(double(coeff_degree(spec.n, int(k))), -spec.decay);
        e.set = fit_sigma([&](double s) { return normalize_volume(s * v); }, target, spec.sigma);
        break;
      }
      case CorpusKind::SingleMode: {
        SpectralCoeffs v(spec.n, spec.L);
        v(spec.ell, spec.m) = spec.a;
        e.set = make_set(normalize_volume(v));
        if (e.set->sigma_bound > spec.sigma) throw std::invalid_argument("corpus: single mode exceeds sigma");
        break;
      }
      case CorpusKind::Ellipsoidal: {
        Eigen::Vector3d t(rng.normal(), rng.normal(), rng.normal());
        t.array() -= t.mean();
        t /= t.cwiseAbs().maxCoeff();
        e.rotation = random_rotation(rng);
        GridPtr q = oversampled(*make_grid(3, spec.L));
        auto make = [&](double s) {
          e.axes = (s * t).array().exp();
          Eigen::VectorXd r(q->size());
          for (Eigen::Index j = 0; j < q->size(); ++j)
            r[j] = ellipsoid_radius(e.axes, e.rotation, q->nodes().row(j).transpose());
          SpectralCoeffs u = analyze({q, r});
          u.a[0] -= std::sqrt(sphere_area(3));
          return normalize_volume(u);
        };
        e.set = fit_sigma(make, target, spec.sigma);
        break;
      }
      case CorpusKind::Counterexample: {
        CounterexampleConfig c;
        c.theta = spec.theta;
        c.chart_radius = spec.chart_radius;
        c.L = spec.L;
        e.set = build_E_theta(c).E;
        break;
      }
      case CorpusKind::PlanarStar: e.polygon = star_polygon(rng, spec); break;
      case CorpusKind::PlanarNotched: e.polygon = notched_polygon(rng); break;
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace nsph
