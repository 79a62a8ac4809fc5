#pragma once

// Deterministic test corpora. Every random draw comes from a counter-based
// generator: draw k of stream s is splitmix64(seed + golden * (s * 2^32 + k)),
// so a corpus is a pure function of its spec on every platform.

#include "nearsphere/planar.hpp"
#include "nearsphere/setcalc.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nsph {

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  std::uint64_t next();
  double uniform();  // [0, 1), 53 bits
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double normal();   // Box-Muller, one variate per two draws

 private:
  std::uint64_t seed_, stream_, k_ = 0;
};

enum class CorpusKind { RandomBandlimited, SingleMode, Ellipsoidal, Counterexample, PlanarStar, PlanarNotched };

std::string to_string(CorpusKind k);
CorpusKind corpus_kind_from_string(const std::string& s);

struct CorpusSpec {
  CorpusKind kind = CorpusKind::RandomBandlimited;
  int count = 10;
  std::uint64_t seed = 1;
  double sigma = 0.05;  // amplitude bound, <= 0.4
  int L = 16;
  int n = 3;
  // single_mode
  int ell = 2, m = 0;
  double a = 0.05;
  // counterexample
  double theta = 0.3;
  double chart_radius = 0.1;
  // random spectra decay like l^-decay
  double decay = 3.0;
  // planar
  int min_vertices = 6, max_vertices = 40;

  bool planar() const { return kind == CorpusKind::PlanarStar || kind == CorpusKind::PlanarNotched; }
  void validate() const;
};

struct CorpusEntry {
  int index = 0;
  std::string id;
  std::optional<NearlySphericalSet> set;
  std::optional<Polygon> polygon;
  Eigen::Vector3d axes = Eigen::Vector3d::Ones();  // ellipsoids only
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

std::vector<CorpusEntry> generate(const CorpusSpec& spec);

/// Radius of the ellipsoid {x : |diag(1/axes) R^T x| = 1} in direction w.
double ellipsoid_radius(const Eigen::Vector3d& axes, const Eigen::Matrix3d& R, const Eigen::Vector3d& w);

/// Adds the constant that puts the volume at |B| (n-dimensional unit ball).
SpectralCoeffs normalize_volume(const SpectralCoeffs& u);

}  // namespace nsph
