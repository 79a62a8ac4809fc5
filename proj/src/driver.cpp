#include "nearsphere/driver.hpp"

#include "nearsphere/report.hpp"
#include "nearsphere/selftest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace nsph {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

RunConfig run_config_from_json(const Json& j, const fs::path& base_dir) {
  ObjectReader r(j, "config");
  RunConfig c;
  auto resolve = [&](const fs::path& p) { return p.is_absolute() || base_dir.empty() ? p : (base_dir / p).lexically_normal(); };
  if (r.has("output_dir")) c.output_dir = resolve(r.str("output_dir"));
  c.threads = r.integer("threads", c.threads);
  if (c.threads < 0) throw SchemaError("config.threads: must be >= 0");
  c.svg_timestamp = r.boolean("svg_timestamp", c.svg_timestamp);
  if (r.has("corpus")) {
    ObjectReader cr(r.raw("corpus"), "config.corpus");
    if (cr.has("manifest")) c.corpus_manifest = resolve(cr.str("manifest"));
    if (cr.has("spec")) c.corpus_spec = corpus_spec_from_json(cr.raw("spec"));
    cr.finish();
    if (bool(c.corpus_manifest) == bool(c.corpus_spec))
      throw SchemaError("config.corpus: give exactly one of \"manifest\", \"spec\"");
  }
  if (r.has("pipeline")) c.pipeline = pipeline_config_from_json(r.raw("pipeline"));
  if (r.has("alexandrov")) c.alexandrov = alex_config_from_json(r.raw("alexandrov"));
  if (r.has("counterexample")) {
    Json cj = r.raw("counterexample");
    if (cj.is_object() && cj.contains("thetas")) {
      const Json& t = cj["thetas"];
      if (!t.is_array() || t.empty()) throw SchemaError("config.counterexample.thetas: expected a non-empty array");
      c.thetas.clear();
      for (const auto& x : t) {
        if (!x.is_number() || !(x.get<double>() > 0 && x.get<double>() <= 0.5))
          throw SchemaError("config.counterexample.thetas: values must lie in (0, 0.5]");
        c.thetas.push_back(x.get<double>());
      }
      cj.erase("thetas");
    }
    c.counterexample = counterexample_config_from_json(cj);
  }
  if (r.has("plane")) {
    ObjectReader pr(r.raw("plane"), "config.plane");
    c.plane_overlays = pr.integer("overlays", c.plane_overlays);
    pr.finish();
    if (c.plane_overlays < 0) throw SchemaError("config.plane.overlays: must be >= 0");
  }
  if (r.has("selftest")) {
    ObjectReader sr(r.raw("selftest"), "config.selftest");
    if (sr.has("criteria")) {
      for (double x : sr.nums("criteria")) {
        if (x != std::floor(x) || x < 1 || x > kNumCriteria)
          throw SchemaError("config.selftest.criteria: ids run from 1 to " + std::to_string(kNumCriteria));
        c.selftest_criteria.push_back(int(x));
      }
    }
    sr.finish();
  }
  r.finish();
  return c;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["output_dir"] = c.output_dir.generic_string();
  j["threads"] = c.threads;
  j["svg_timestamp"] = c.svg_timestamp;
  Json corpus = Json::object();
  if (c.corpus_manifest) corpus["manifest"] = c.corpus_manifest->generic_string();
  if (c.corpus_spec) corpus["spec"] = to_json(*c.corpus_spec);
  j["corpus"] = corpus;
  j["pipeline"] = to_json(c.pipeline);
  j["alexandrov"] = to_json(c.alexandrov);
  Json cx = to_json(c.counterexample);
  cx["thetas"] = c.thetas;
  j["counterexample"] = cx;
  j["plane"] = Json{{"overlays", c.plane_overlays}};
  j["selftest"] = Json{{"criteria", c.selftest_criteria}};
  return j;
}

// ---------------------------------------------------------------- helpers

std::vector<CorpusEntry> load_entries(const RunConfig& c) {
  std::vector<CorpusEntry> e;
  if (c.corpus_manifest) e = load_corpus(*c.corpus_manifest).entries;
  else if (c.corpus_spec) e = generate(*c.corpus_spec);
  if (e.empty()) throw EmptyCorpus();
  return e;
}

void parallel_for(int n, int threads, const std::function<void(int)>& f) {
  if (threads <= 0) threads = int(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

namespace {

std::vector<NearlySphericalSet> spherical(const std::vector<CorpusEntry>& es) {
  std::vector<NearlySphericalSet> out;
  for (const auto& e : es) {
    if (!e.set) throw SchemaError("entry " + e.id + " is planar; this command needs nearly spherical sets");
    out.push_back(*e.set);
  }
  return out;
}

// The config as embedded in result files: where the files go and how many
// workers ran do not change any number, so they are left out.
Json result_config(const RunConfig& c) {
  Json j = to_json(c);
  j.erase("output_dir");
  j.erase("threads");
  return j;
}

Json head(const std::string& id, int index) { return Json{{"id", id}, {"index", index}}; }

Json merged(Json a, const Json& b) {
  for (auto it = b.begin(); it != b.end(); ++it) a[it.key()] = it.value();
  return a;
}

void check(Artifacts& a, bool ok, const std::string& what) {
  if (!ok) a.failures.push_back(what);
}

std::string summary_line(const std::string& cmd, const Artifacts& a, const std::string& extra) {
  std::string s = cmd + ": " + extra;
  if (a.failures.empty()) return s + "; all assertions pass";
  return s + "; " + std::to_string(a.failures.size()) + " assertion(s) failed, first: " + a.failures.front();
}

Series scatter(const std::string& name) {
  Series s;
  s.name = name;
  s.points = true;
  return s;
}

Series line(const std::string& name) {
  Series s;
  s.name = name;
  return s;
}

int dominant_degree(const SpectralCoeffs& u) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(u.L + 1);
  for (Eigen::Index k = 1; k < u.a.size(); ++k) e[coeff_degree(u.n, int(k))] += u.a[k] * u.a[k];
  Eigen::Index best = 0;
  e.maxCoeff(&best);
  return int(best);
}

}  // namespace

// ---------------------------------------------------------------- commands

Artifacts cmd_gen(const RunConfig& c) {
  if (!c.corpus_spec) throw SchemaError("gen: config.corpus.spec is required");
  Artifacts a;
  const auto entries = generate(*c.corpus_spec);
  for (auto& [name, text] : corpus_files(*c.corpus_spec, entries)) a.files["corpus/" + name] = text;
  a.summary = "gen: " + std::to_string(entries.size()) + " entries of kind " + to_string(c.corpus_spec->kind);
  return a;
}

Artifacts cmd_convexify(const RunConfig& c) {
  const auto entries = load_entries(c);
  const auto sets = spherical(entries);
  std::vector<PipelineResult> res(sets.size());
  parallel_for(int(sets.size()), c.threads, [&](int i) { res[i] = construct_F(sets[i], c.pipeline); });

  Artifacts a;
  std::vector<Json> rows;
  Series slack = scatter("slack"), lhs = scatter("P(E) - P(F)"), rhs = scatter("lambda f(|E delta F|)");
  int accepted = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    rows.push_back(merged(head(entries[i].id, entries[i].index), to_json(r)));
    if (!r.accepted) continue;
    ++accepted;
    const auto& s = r.report;
    min_slack = std::min(min_slack, s.slack);
    slack.x.push_back(s.symdiff_EF), slack.y.push_back(s.slack);
    lhs.x.push_back(s.symdiff_EF), lhs.y.push_back(s.lhs);
    rhs.x.push_back(s.symdiff_EF), rhs.y.push_back(s.rhs);
    check(a, s.slack >= -1e-8, entries[i].id + ": slack >= -1e-8");
    check(a, r.convex, entries[i].id + ": F convex");
    check(a, std::abs(s.volume_F - s.volume_E) <= 1e-8, entries[i].id + ": |F| = |E|");
  }
  const double rate = double(accepted) / double(res.size());
  check(a, rate >= 0.95, "convergence rate >= 0.95");

  Json summary{{"count", int(res.size())},
               {"accepted", accepted},
               {"convergence_rate", rate},
               {"min_slack", accepted ? Json(min_slack) : Json(nullptr)},
               {"failures", a.failures}};
  Json out{{"config", result_config(c)}, {"summary", summary}, {"results", rows}};
  a.files["convexify.csv"] = records_to_csv(rows);
  a.files["convexify.json"] = dump(out);

  Chart ch;
  ch.title = "stability slack of accepted runs";
  ch.xlabel = "|E delta F|";
  ch.ylabel = "P(E) - P(F) - lambda f(|E delta F|)";
  ch.series = {slack};
  ch.hlines = {0.0};
  ch.timestamp = c.svg_timestamp;
  a.files["convexify_slack.svg"] = render_svg(ch);
  ch.title = "both sides of the inequality";
  ch.ylabel = "value";
  ch.series = {lhs, rhs};
  ch.hlines.clear();
  ch.include_origin = true;
  a.files["convexify_sides.svg"] = render_svg(ch);
  a.summary = summary_line("convexify", a, std::to_string(accepted) + "/" + std::to_string(res.size()) + " accepted");
  return a;
}

Artifacts cmd_alexandrov(const RunConfig& c) {
  const auto entries = load_entries(c);
  const auto sets = spherical(entries);
  std::vector<AlexReport> res(sets.size());
  parallel_for(int(sets.size()), c.threads, [&](int i) { res[i] = alex_check(sets[i], c.alexandrov); });

  Artifacts a;
  std::vector<Json> rows;
  Series by_amp = scatter("ratio"), by_deg = scatter("ratio");
  double max_ratio = 0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const int deg = dominant_degree(sets[i].u);
    rows.push_back(merged(merged(head(entries[i].id, entries[i].index), Json{{"dominant_degree", deg}}), to_json(res[i])));
    check(a, std::isfinite(res[i].ratio), entries[i].id + ": ratio finite");
    if (!res[i].ratio_defined) continue;
    max_ratio = std::max(max_ratio, res[i].ratio);
    by_amp.x.push_back(res[i].sigma), by_amp.y.push_back(res[i].ratio);
    by_deg.x.push_back(deg), by_deg.y.push_back(res[i].ratio);
  }
  Json summary{{"count", int(res.size())}, {"max_ratio", max_ratio}, {"failures", a.failures}};
  a.files["alexandrov.csv"] = records_to_csv(rows);
  a.files["alexandrov.json"] = dump(Json{{"config", result_config(c)}, {"summary", summary}, {"results", rows}});
  Chart ch;
  ch.title = "deviation over curvature oscillation";
  ch.xlabel = "amplitude (sigma bound)";
  ch.ylabel = "ratio";
  ch.series = {by_amp};
  ch.include_origin = true;
  ch.timestamp = c.svg_timestamp;
  a.files["alexandrov_ratio_amplitude.svg"] = render_svg(ch);
  ch.xlabel = "dominant degree";
  ch.series = {by_deg};
  a.files["alexandrov_ratio_degree.svg"] = render_svg(ch);
  a.summary = summary_line("alexandrov", a, "max ratio " + format_number(max_ratio));
  return a;
}

Artifacts cmd_counterexample(const RunConfig& c) {
  PipelineConfig pc = c.pipeline;
  pc.minimize.L = std::max(pc.minimize.L, c.counterexample.L);
  const SharpnessReport rep = sharpness_experiment(c.thetas, c.counterexample, pc);

  Artifacts a;
  std::vector<Json> rows;
  Series rho = scatter("rho"), fit = line("fit through 0");
  double tmax = 0;
  for (const auto& r : rep.rows) {
    rows.push_back(to_json(r));
    rho.x.push_back(r.theta), rho.y.push_back(r.rho);
    tmax = std::max(tmax, r.theta);
    check(a, r.margin_E < 0, "theta " + format_number(r.theta) + ": E_theta non-convex");
    check(a, r.norms.w1inf_ok && r.norms.lap_ok && r.norms.hess_ok,
          "theta " + format_number(r.theta) + ": norm brackets within factor 2");
  }
  check(a, rep.excluded == 0, "all theta runs converged");
  check(a, rep.rho_monotone, "rho strictly decreasing as theta decreases");
  check(a, rep.fit_slope > 0, "positive fit slope");
  fit.x = {0.0, tmax};
  fit.y = {0.0, rep.fit_slope * tmax};

  Json out = to_json(rep);
  out["failures"] = a.failures;
  a.files["counterexample.csv"] = rows.empty() ? std::string() : records_to_csv(rows);
  a.files["counterexample.json"] = dump(Json{{"config", result_config(c)}, {"report", out}});
  Chart ch;
  ch.title = "(P(E) - P(F)) / |E delta F| against theta";
  ch.xlabel = "theta";
  ch.ylabel = "rho";
  ch.series = {rho, fit};
  ch.include_origin = true;
  ch.timestamp = c.svg_timestamp;
  a.files["counterexample.svg"] = render_svg(ch);
  a.summary = summary_line("counterexample", a, rep.summary);
  return a;
}

Artifacts cmd_plane(const RunConfig& c) {
  const auto entries = load_entries(c);
  std::vector<Polygon> polys;
  for (const auto& e : entries) {
    if (!e.polygon) throw SchemaError("entry " + e.id + " is not planar; plane needs polygons");
    polys.push_back(*e.polygon);
  }
  std::vector<PlaneReport> res(polys.size());
  parallel_for(int(polys.size()), c.threads, [&](int i) { res[i] = appendix_check(polys[i]); });

  Artifacts a;
  std::vector<Json> rows;
  Series s1 = scatter("first inequality"), s2 = scatter("second inequality");
  double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& r = res[i];
    const std::string& id = entries[i].id;
    rows.push_back(merged(merged(head(id, entries[i].index), Json{{"vertices", int(polys[i].size())}}), to_json(r)));
    min1 = std::min(min1, r.slack1), min2 = std::min(min2, r.slack2);
    s1.x.push_back(r.hull_minus_E / r.area_hull), s1.y.push_back(r.slack1);
    s2.x.push_back(r.hull_minus_E / r.area_hull), s2.y.push_back(r.slack2);
    check(a, r.slack1 >= -1e-12, id + ": first inequality slack >= -1e-12");
    check(a, r.slack2 >= -1e-12, id + ": second inequality slack >= -1e-12");
    check(a, r.perimeter_hull <= r.perimeter_E * (1 + 1e-15), id + ": P(cov E) <= P(E)");
    check(a, r.F_outside_hull <= 1e-12, id + ": F inside cov E");
    check(a, r.nested_defect <= 1e-12, id + ": nested measure identity");
    if (r.convex_input) check(a, r.slack1 == 0 && r.slack2 == 0, id + ": convex input gives zero slack");
  }
  Json summary{{"count", int(res.size())}, {"min_slack1", min1}, {"min_slack2", min2}, {"failures", a.failures}};
  a.files["plane.csv"] = records_to_csv(rows);
  a.files["plane.json"] = dump(Json{{"config", result_config(c)}, {"summary", summary}, {"results", rows}});
  Chart ch;
  ch.title = "planar stability slacks";
  ch.xlabel = "|cov E \\ E| / |cov E|";
  ch.ylabel = "slack";
  ch.series = {s1, s2};
  ch.hlines = {0.0};
  ch.timestamp = c.svg_timestamp;
  a.files["plane_slack.svg"] = render_svg(ch);
  for (int i = 0; i < std::min<int>(c.plane_overlays, int(polys.size())); ++i) {
    const auto& r = res[i];
    const double s = std::sqrt(kPi / r.area_E);
    const Polygon En = scale(translate(polys[i], -r.origin), s);
    const Polygon Hn = scale(translate(convex_hull(polys[i]), -r.origin), s);
    a.files["plane_overlay_" + entries[i].id + ".svg"] = render_polygons_svg(
        {{Hn, "#888888", "", "cov E"}, {scale(Hn, r.theta), "#2ca02c", "#2ca02c", "F"}, {En, "#1f77b4", "#1f77b4", "E"}},
        entries[i].id + " (|E| = pi)", c.svg_timestamp);
  }
  a.summary = summary_line("plane", a, std::to_string(res.size()) + " polygons, min slacks " + format_number(min1) +
                                           ", " + format_number(min2));
  return a;
}

Artifacts cmd_selftest(const RunConfig& c) {
  std::vector<int> ids = c.selftest_criteria;
  if (ids.empty())
    for (int i = 1; i <= kNumCriteria; ++i) ids.push_back(i);
  Artifacts a;
  std::vector<Json> rows;
  int passed = 0;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, c.threads);
    rows.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"seconds", r.seconds},
                        {"budget", r.budget}, {"detail", r.detail}});
    passed += r.passed;
    check(a, r.passed, "criterion " + std::to_string(r.id) + " (" + r.name + "): " + r.detail);
  }
  // timings vary between runs, so only the CSV carries them
  std::vector<Json> stable = rows;
  for (auto& r : stable) r.erase("seconds");
  a.files["selftest.csv"] = records_to_csv(rows);
  a.files["selftest.json"] = dump(Json{{"config", result_config(c)}, {"criteria", stable}, {"failures", a.failures}});
  a.summary = summary_line("selftest", a, std::to_string(passed) + "/" + std::to_string(ids.size()) + " criteria pass");
  return a;
}

Artifacts run_command(const std::string& command, const RunConfig& c) {
  if (command == "gen") return cmd_gen(c);
  if (command == "convexify") return cmd_convexify(c);
  if (command == "alexandrov") return cmd_alexandrov(c);
  if (command == "counterexample") return cmd_counterexample(c);
  if (command == "plane") return cmd_plane(c);
  if (command == "selftest") return cmd_selftest(c);
  throw SchemaError("unknown command '" + command + "'");
}

void write_artifacts(const Artifacts& a, const fs::path& dir) {
  for (const auto& [name, text] : a.files) write_text_file(dir / name, text);
}

}  // namespace nsph
