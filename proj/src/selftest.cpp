#include "nearsphere/selftest.hpp"

#include "nearsphere/alexandrov.hpp"
#include "nearsphere/corpus.hpp"
#include "nearsphere/counterex.hpp"
#include "nearsphere/driver.hpp"
#include "nearsphere/pipeline.hpp"
#include "nearsphere/planar.hpp"
#include "nearsphere/report.hpp"
#include "nearsphere/stabfun.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace nsph {

namespace {

// Collects named checks; the first failure becomes the detail line.
struct Checks {
  std::string first_failure;
  std::ostringstream notes;
  bool ok = true;

  void operator()(bool pass, const std::string& what) {
    if (!pass && ok) first_failure = what;
    ok = ok && pass;
  }
  template <class T>
  Checks& note(const std::string& k, T v) {
    notes << (notes.tellp() > 0 ? ", " : "") << k << "=" << v;
    return *this;
  }
};

std::string g(double x) { return format_number(x); }

SpectralCoeffs random_field(CounterRng& rng, int n, int L, double decay) {
  SpectralCoeffs c(n, L);
  for (Eigen::Index k = 0; k < c.a.size(); ++k)
    c.a[k] = rng.normal() * std::pow(double(std::max(coeff_degree(n, int(k)), 1)), -decay);
  return c;
}

// ---------------------------------------------------------------- 1
void spectral_round_trip(Checks& ck, int) {
  CounterRng rng(101, 0);
  double worst_vals = 0, worst_coef = 0;
  GridPtr g32 = make_grid(3, 32);
  for (int k = 0; k < 5; ++k) {
    const SpectralCoeffs c = random_field(rng, 3, 32, 0.0);
    const SphericalField f = synthesize(c, g32);
    const SpectralCoeffs c2 = analyze(f);
    const SphericalField f2 = synthesize(c2, g32);
    worst_coef = std::max(worst_coef, (c2.a - c.a).cwiseAbs().maxCoeff());
    worst_vals = std::max(worst_vals, (f2.values - f.values).cwiseAbs().maxCoeff());
  }
  ck(worst_vals < 1e-10, "synthesis sup error " + g(worst_vals));
  ck(worst_coef < 1e-10, "coefficient error " + g(worst_coef));
  ck.note("sup_err", g(worst_vals)).note("coef_err", g(worst_coef));
}

// ---------------------------------------------------------------- 2
void ball_calculus(Checks& ck, int) {
  const int n = 3, L = 16;
  const auto B = make_ball(n, L);
  const double P = perimeter(B), V = volume(B);
  const auto S = mean_curvature(B).S_nodal.values;
  const double cm = convexity_margin(B);
  ck(std::abs(P - 4 * kPi) < 1e-8, "P(B) = " + g(P));
  ck(std::abs(V - 4 * kPi / 3) < 1e-8, "|B| = " + g(V));
  ck((S.array() - 2.0).abs().maxCoeff() < 1e-8, "S != 2 on B");
  ck(std::abs(cm - 1) < 1e-8, "convexity margin " + g(cm));
  double worst = 0;
  for (double r : {0.9, 1.1}) {
    const auto Br = make_ball(n, L, r);
    const double eP = std::abs(perimeter(Br) / P - r * r);
    const double eV = std::abs(volume(Br) / V - r * r * r);
    const double eS = (mean_curvature(Br).S_nodal.values.array() / S.array() - 1 / r).abs().maxCoeff();
    worst = std::max({worst, eP, eV, eS});
  }
  ck(worst < 1e-9, "dilation law error " + g(worst));
  ck.note("P-4pi", g(P - 4 * kPi)).note("scaling_err", g(worst));
}

// ---------------------------------------------------------------- 3
// Integral form of the curvature identity, tested against S from the
// fundamental forms:
//   int e^xi S phi = int ((n-1) phi + D xi . D phi) / sqrt(1 + |D xi|^2).
void weak_curvature(Checks& ck, int) {
  CorpusSpec spec;
  spec.count = 20;
  spec.seed = 303;
  spec.sigma = 0.05;
  spec.L = 16;
  const auto sets = generate(spec);
  CounterRng rng(303, 1000);
  double worst = 0;
  for (const auto& e : sets) {
    // a wider band puts the quadrature far beyond the integrands' content
    const NearlySphericalSet E = make_set(e.set->u.resized(48));
    const GridPtr q = oversampled(*E.grid);
    const Eigen::VectorXd S = pointwise_mean_curvature(E);
    const Eigen::ArrayXd r = 1.0 + synthesize(E.u, q).values.array();
    const Eigen::MatrixXd Dxi = grad_tau(E.u, q).comps.array().colwise() / r;
    const Eigen::ArrayXd root = (1.0 + Dxi.rowwise().squaredNorm().array()).sqrt();
    for (int k = 0; k < 20; ++k) {
      SpectralCoeffs phi = random_field(rng, 3, 16, 1.0);
      phi = (1.0 / phi.a.norm()) * phi;
      const Eigen::ArrayXd pv = synthesize(phi, q).values.array();
      const Eigen::MatrixXd Dphi = grad_tau(phi, q).comps;
      const double lhs = integrate(*q, (r * S.array() * pv).matrix());
      const Eigen::ArrayXd flux = (Dxi.array() * Dphi.array()).rowwise().sum();
      const double rhs = integrate(*q, ((2.0 * pv + flux) / root).matrix());
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  ck(worst < 1e-8, "residual " + g(worst));
  ck.note("sets", 20).note("tests_per_set", 20).note("max_residual", g(worst));
}

// ---------------------------------------------------------------- 4
void linearized_alexandrov(Checks& ck, int) {
  for (int l = 2; l <= 5; ++l) {
    SpectralCoeffs u(3, 16);
    u(l, 0) = 1e-3;
    const double r = alex_check(make_set(u)).ratio, t = linearized_ratio(3, l);
    const double tol = l == 2 ? 0.01 : 0.02;
    ck(std::abs(r / t - 1) < tol, "l=" + std::to_string(l) + " ratio " + g(r) + " vs " + g(t));
    ck.note("l" + std::to_string(l), g(r) + "/" + g(t));
  }
}

// ---------------------------------------------------------------- 5
void corpus_boundedness(Checks& ck, int threads) {
  CorpusSpec spec;
  spec.count = 100;
  spec.seed = 505;
  spec.sigma = 0.05;
  spec.L = 16;
  const auto sets = generate(spec);
  std::vector<double> r32(sets.size()), r64(sets.size());
  parallel_for(int(sets.size()), threads, [&](int i) {
    r32[i] = alex_check(make_set(sets[i].set->u.resized(32))).ratio;
    r64[i] = alex_check(make_set(sets[i].set->u.resized(64))).ratio;
  });
  const double m32 = *std::max_element(r32.begin(), r32.end());
  const double m64 = *std::max_element(r64.begin(), r64.end());
  ck(std::isfinite(m32) && std::isfinite(m64) && m32 > 0, "corpus max ratio not finite");
  ck(std::abs(m64 / m32 - 1) < 0.02, "L=32 -> 64 drift " + g(m64 / m32 - 1));
  AlexConfig raw;
  raw.recenter = false;
  double worst_translated = std::numeric_limits<double>::infinity();
  for (int m = -1; m <= 1; ++m) {
    SpectralCoeffs u(3, 32);
    u(1, m) = 1e-3;
    worst_translated = std::min(worst_translated, alex_check(make_set(u), raw).ratio);
  }
  ck(worst_translated > 10 * m64, "translated ratio " + g(worst_translated) + " not > 10x corpus max");
  ck.note("max_ratio_L32", g(m32)).note("max_ratio_L64", g(m64)).note("min_translated", g(worst_translated));
}

// ---------------------------------------------------------------- 6
void pipeline_identity(Checks& ck, int) {
  PipelineConfig pc;
  const auto B = make_ball(3, 16);
  const auto res = construct_F(B, pc);
  const double dev = std::max(res.F.u.a.cwiseAbs().maxCoeff(), res.F.center.norm());
  ck(dev < 1e-6, "F differs from B by " + g(dev));
  ck(std::abs(res.report.slack) < 1e-12, "slack " + g(res.report.slack));
  ck.note("deviation", g(dev)).note("slack", g(res.report.slack));
}

// ---------------------------------------------------------------- 7
void near_sphere_inequality(Checks& ck, int threads) {
  std::vector<NearlySphericalSet> sets;
  for (auto kind : {CorpusKind::Ellipsoidal, CorpusKind::RandomBandlimited}) {
    CorpusSpec spec;
    spec.kind = kind;
    spec.count = 15;
    spec.seed = 707;
    spec.sigma = 0.05;
    spec.L = 16;
    for (auto& e : generate(spec)) sets.push_back(*e.set);
  }
  PipelineConfig pc;
  pc.lambda = 0.1;
  std::vector<PipelineResult> res(sets.size());
  parallel_for(int(sets.size()), threads, [&](int i) { res[i] = construct_F(sets[i], pc); });
  int accepted = 0;
  double min_slack = std::numeric_limits<double>::infinity(), max_c2 = 0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    if (!r.accepted) continue;
    ++accepted;
    const std::string id = "set " + std::to_string(i);
    ck(r.report.slack >= -1e-8, id + " slack " + g(r.report.slack));
    ck(r.report.convexity_margin_F > 0, id + " F not convex");
    ck(std::abs(r.report.volume_F - r.report.volume_E) <= 1e-8, id + " volume mismatch");
    min_slack = std::min(min_slack, r.report.slack);
    max_c2 = std::max(max_c2, r.report.c2_norm);
  }
  const double rate = double(accepted) / double(res.size());
  ck(rate >= 0.95, "convergence rate " + g(rate));
  ck.note("accepted", std::to_string(accepted) + "/" + std::to_string(res.size()))
      .note("min_slack", g(min_slack))
      .note("max_C2_norm_F", g(max_c2));
}

// ---------------------------------------------------------------- 8
void sharpness(Checks& ck, int) {
  CounterexampleConfig base;
  PipelineConfig pc;
  pc.minimize.L = base.L;
  const auto rep = sharpness_experiment({0.3, 0.2, 0.1}, base, pc);
  ck(rep.excluded == 0, std::to_string(rep.excluded) + " theta runs did not converge");
  for (const auto& r : rep.rows) {
    const std::string t = "theta=" + g(r.theta);
    ck(r.margin_E < 0, t + ": E_theta convex (margin " + g(r.margin_E) + ")");
    ck(r.norms.w1inf_ok && r.norms.lap_ok && r.norms.hess_ok, t + ": norm bracket missed (Hessian " + g(r.norms.hess) + ")");
    ck.note("rho(" + g(r.theta) + ")", g(r.rho));
  }
  ck(rep.rho_monotone, "rho not strictly decreasing");
  ck(rep.fit_slope > 0, "fit slope " + g(rep.fit_slope));
  ck.note("fit_slope", g(rep.fit_slope));
}

// ---------------------------------------------------------------- 9
void planar_inequalities(Checks& ck, int threads) {
  std::vector<Polygon> polys;
  for (auto kind : {CorpusKind::PlanarStar, CorpusKind::PlanarNotched}) {
    CorpusSpec spec;
    spec.kind = kind;
    spec.count = 500;
    spec.seed = 909;
    spec.sigma = 0.4;
    for (auto& e : generate(spec)) polys.push_back(*e.polygon);
  }
  const std::size_t n_random = polys.size();
  // convex inputs: hulls of the first few random polygons
  for (std::size_t i = 0; i < 50; ++i) polys.push_back(convex_hull(polys[i]));
  std::vector<PlaneReport> res(polys.size());
  parallel_for(int(polys.size()), threads, [&](int i) { res[i] = appendix_check(polys[i]); });
  double m1 = std::numeric_limits<double>::infinity(), m2 = m1;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    if (i < n_random) m1 = std::min(m1, r.slack1), m2 = std::min(m2, r.slack2);
    else
      ck(r.convex_input && r.slack1 == 0 && r.slack2 == 0, "convex input " + std::to_string(i) + " slack not zero");
  }
  ck(m1 >= -1e-12, "first inequality slack " + g(m1));
  ck(m2 >= -1e-12, "second inequality slack " + g(m2));
  ck.note("polygons", n_random).note("convex_inputs", res.size() - n_random).note("min_slack1", g(m1)).note("min_slack2", g(m2));
}

// ---------------------------------------------------------------- 10
void profile_calculus(Checks& ck, int) {
  CounterRng rng(1010, 0);
  const double k = profile_kink<double>();
  double lip = 0, conv = 0, half = 0;
  for (int i = 0; i < 10000; ++i) {
    const double s = rng.uniform(), t = rng.uniform();
    if (s != t) lip = std::max(lip, std::abs(profile_f(s) - profile_f(t)) - 2 * std::abs(s - t));
    const double a = k * rng.uniform(), b = k * rng.uniform();
    conv = std::max(conv, profile_f(0.5 * (a + b)) - 0.5 * (profile_f(a) + profile_f(b)));
    const double h = 0.2 * (1.0 - rng.uniform());
    half = std::max(half, profile_f(h) / 4 - profile_f(h / 2));
  }
  const double below = profile_f(std::nextafter(k, 0.0)), above = profile_f(std::nextafter(k, 1.0));
  const double jump = std::max(std::abs(below - profile_f(k)), std::abs(above - profile_f(k)));
  ck(lip <= 1e-14, "Lipschitz excess " + g(lip));
  ck(conv <= 1e-14, "convexity excess " + g(conv));
  ck(half <= 1e-14, "halving excess " + g(half));
  ck(jump <= 1e-14, "jump at 1/e " + g(jump));
  ck.note("lip_excess", g(lip)).note("convexity_excess", g(conv)).note("halving_excess", g(half)).note("jump", g(jump));
}

// ---------------------------------------------------------------- 11
void determinism(Checks& ck, int threads) {
  RunConfig c;
  CorpusSpec spec;
  spec.count = 3;
  spec.seed = 1111;
  spec.L = 10;
  c.corpus_spec = spec;
  c.pipeline.minimize.L = 10;
  c.threads = std::max(threads, 2);
  const Artifacts a = cmd_convexify(c), b = cmd_convexify(c);
  c.threads = 1;
  const Artifacts s = cmd_convexify(c);
  for (const auto& name : {"convexify.csv", "convexify.json"}) {
    ck(a.files.at(name) == b.files.at(name), std::string(name) + " differs between runs");
    ck(a.files.at(name) == s.files.at(name), std::string(name) + " depends on the thread count");
  }
  ck.note("bytes_csv", a.files.at("convexify.csv").size()).note("bytes_json", a.files.at("convexify.json").size());
}

struct Entry {
  const char* name;
  double budget;
  void (*run)(Checks&, int);
};

const Entry kEntries[kNumCriteria] = {
    {"spectral round trip", 1, spectral_round_trip},
    {"ball calculus", 10, ball_calculus},
    {"weak-form mean curvature", 30, weak_curvature},
    {"linearized Alexandrov ratio", 60, linearized_alexandrov},
    {"Alexandrov corpus boundedness", 600, corpus_boundedness},
    {"pipeline identity", 60, pipeline_identity},
    {"near-sphere inequality corpus", 1800, near_sphere_inequality},
    {"sharpness of the profile", 1200, sharpness},
    {"planar hull inequalities", 60, planar_inequalities},
    {"profile calculus", 1, profile_calculus},
    {"determinism", 300, determinism},
};

}  // namespace

bool known_unattainable(int id) { return id == 8; }

CriterionResult run_criterion(int id, int threads) {
  CriterionResult out;
  out.id = id;
  if (id < 1 || id > kNumCriteria) {
    out.name = "unknown";
    out.detail = "no such criterion";
    return out;
  }
  const Entry& e = kEntries[id - 1];
  out.name = e.name;
  out.budget = e.budget;
  Checks ck;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    e.run(ck, threads);
  } catch (const std::exception& ex) {
    ck(false, std::string("exception: ") + ex.what());
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ck(out.seconds <= out.budget, "over budget: " + g(out.seconds) + " s > " + g(out.budget) + " s");
  out.passed = ck.ok;
  out.detail = ck.ok ? ck.notes.str() : ck.first_failure + " [" + ck.notes.str() + "]";
  return out;
}

}  // namespace nsph
