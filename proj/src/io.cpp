#include "nearsphere/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nsph {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- reader

ObjectReader::ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) throw SchemaError(where_ + ": expected an object");
}

const Json& ObjectReader::raw(const std::string& key) {
  if (!j_.contains(key)) throw SchemaError(where_ + ": missing key '" + key + "'");
  used_.push_back(key);
  return j_.at(key);
}

double ObjectReader::num(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_number()) throw SchemaError(where_ + "." + key + ": expected a number");
  return v.get<double>();
}

double ObjectReader::num(const std::string& key, double fallback) { return has(key) ? num(key) : fallback; }

int ObjectReader::integer(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_number_integer()) throw SchemaError(where_ + "." + key + ": expected an integer");
  return v.get<int>();
}

int ObjectReader::integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

std::uint64_t ObjectReader::u64(const std::string& key, std::uint64_t fallback) {
  if (!has(key)) return fallback;
  const Json& v = raw(key);
  if (!v.is_number_unsigned()) throw SchemaError(where_ + "." + key + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

bool ObjectReader::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const Json& v = raw(key);
  if (!v.is_boolean()) throw SchemaError(where_ + "." + key + ": expected true or false");
  return v.get<bool>();
}

std::string ObjectReader::str(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_string()) throw SchemaError(where_ + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::string ObjectReader::str(const std::string& key, const std::string& fallback) {
  return has(key) ? str(key) : fallback;
}

std::vector<double> ObjectReader::nums(const std::string& key) {
  const Json& v = raw(key);
  if (!v.is_array()) throw SchemaError(where_ + "." + key + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) throw SchemaError(where_ + "." + key + ": expected numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void ObjectReader::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (std::find(used_.begin(), used_.end(), it.key()) == used_.end())
      throw SchemaError(where_ + ": unknown key '" + it.key() + "'");
}

// ---------------------------------------------------------------- files

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_text_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const fs::path& p) {
  try {
    return Json::parse(read_text_file(p));
  } catch (const Json::parse_error& e) {
    throw SchemaError(p.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

// ---------------------------------------------------------------- geometry

namespace {

Json vec(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

std::string profile_name(Profile p) { return p == Profile::Linear ? "linear" : "log_linear"; }

Profile profile_from(const std::string& s, const std::string& where) {
  if (s == "log_linear") return Profile::LogLinear;
  if (s == "linear") return Profile::Linear;
  throw SchemaError(where + ": profile must be \"log_linear\" or \"linear\"");
}

template <class F>
auto schema_guard(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

}  // namespace

Json field_to_json(const SpectralCoeffs& c) {
  Json j;
  j["n"] = c.n;
  j["L"] = c.L;
  j["repr"] = "spectral";
  j["data"] = vec(c.a);
  return j;
}

SpectralCoeffs field_from_json(const Json& j) {
  ObjectReader r(j, "field");
  const int n = r.integer("n"), L = r.integer("L");
  if (n != 2 && n != 3) throw SchemaError("field.n: must be 2 or 3");
  if (L < 0 || L > 128) throw SchemaError("field.L: must lie in [0, 128]");
  const std::string repr = r.str("repr");
  const std::vector<double> data = r.nums("data");
  r.finish();
  if (repr == "spectral") {
    if (data.size() != std::size_t(num_coeffs(n, L))) throw SchemaError("field.data: wrong number of coefficients");
    SpectralCoeffs c(n, L);
    c.a = to_vec(data);
    return c;
  }
  if (repr == "grid") {
    GridPtr g = make_grid(n, L);
    if (Eigen::Index(data.size()) != g->size()) throw SchemaError("field.data: wrong number of grid values");
    return analyze({g, to_vec(data)});
  }
  throw SchemaError("field.repr: must be \"spectral\" or \"grid\"");
}

Json set_to_json(const NearlySphericalSet& E) {
  Json j;
  j["center"] = vec(E.center);
  j["field"] = field_to_json(E.u);
  return j;
}

NearlySphericalSet set_from_json(const Json& j) {
  ObjectReader r(j, "set");
  const std::vector<double> c = r.nums("center");
  SpectralCoeffs u = field_from_json(r.raw("field"));
  r.finish();
  if (int(c.size()) != u.n) throw SchemaError("set.center: dimension does not match the field");
  return schema_guard("set", [&] { return make_set(u, to_vec(c)); });
}

Json polygon_to_json(const Polygon& P) {
  Json v = Json::array();
  for (Eigen::Index i = 0; i < P.size(); ++i) v.push_back({P.v(0, i), P.v(1, i)});
  return Json{{"vertices", v}};
}

Polygon polygon_from_json(const Json& j) {
  ObjectReader r(j, "polygon");
  const Json& v = r.raw("vertices");
  r.finish();
  if (!v.is_array()) throw SchemaError("polygon.vertices: expected an array");
  Eigen::Matrix2Xd m(2, Eigen::Index(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number())
      throw SchemaError("polygon.vertices: expected [x, y] pairs");
    m.col(Eigen::Index(i)) << v[i][0].get<double>(), v[i][1].get<double>();
  }
  return schema_guard("polygon", [&] { return make_polygon(m); });
}

// ---------------------------------------------------------------- configs

Json to_json(const CorpusSpec& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  j["count"] = s.count;
  j["seed"] = s.seed;
  j["sigma"] = s.sigma;
  j["L"] = s.L;
  j["n"] = s.n;
  j["ell"] = s.ell;
  j["m"] = s.m;
  j["a"] = s.a;
  j["theta"] = s.theta;
  j["chart_radius"] = s.chart_radius;
  j["decay"] = s.decay;
  j["min_vertices"] = s.min_vertices;
  j["max_vertices"] = s.max_vertices;
  return j;
}

CorpusSpec corpus_spec_from_json(const Json& j) {
  ObjectReader r(j, "corpus");
  CorpusSpec s;
  s.kind = schema_guard("corpus.kind", [&] { return corpus_kind_from_string(r.str("kind")); });
  s.count = r.integer("count", s.count);
  s.seed = r.u64("seed", s.seed);
  s.sigma = r.num("sigma", s.sigma);
  s.L = r.integer("L", s.L);
  s.n = r.integer("n", s.n);
  s.ell = r.integer("ell", s.ell);
  s.m = r.integer("m", s.m);
  s.a = r.num("a", s.a);
  s.theta = r.num("theta", s.theta);
  s.chart_radius = r.num("chart_radius", s.chart_radius);
  s.decay = r.num("decay", s.decay);
  s.min_vertices = r.integer("min_vertices", s.min_vertices);
  s.max_vertices = r.integer("max_vertices", s.max_vertices);
  r.finish();
  schema_guard("corpus", [&] { s.validate(); return 0; });
  return s;
}

Json to_json(const MinimizeConfig& c) {
  Json j;
  j["L"] = c.L;
  j["max_iters"] = c.max_iters;
  j["grad_tol"] = c.grad_tol;
  j["mollifier_delta"] = c.mollifier_delta;
  j["seed"] = c.seed;
  j["profile"] = profile_name(c.profile);
  return j;
}

MinimizeConfig minimize_config_from_json(const Json& j, MinimizeConfig c) {
  ObjectReader r(j, "minimize");
  c.L = r.integer("L", c.L);
  c.max_iters = r.integer("max_iters", c.max_iters);
  c.grad_tol = r.num("grad_tol", c.grad_tol);
  c.mollifier_delta = r.num("mollifier_delta", c.mollifier_delta);
  c.seed = r.u64("seed", c.seed);
  if (r.has("profile")) c.profile = profile_from(r.str("profile"), "minimize.profile");
  r.finish();
  schema_guard("minimize", [&] { c.validate(); return 0; });
  return c;
}

Json to_json(const PipelineConfig& c) {
  Json j;
  j["lambda"] = c.lambda;
  j["sigma"] = c.sigma;
  j["minimize"] = to_json(c.minimize);
  j["epsilon_override"] = c.epsilon_override ? Json(*c.epsilon_override) : Json(nullptr);
  return j;
}

PipelineConfig pipeline_config_from_json(const Json& j) {
  ObjectReader r(j, "pipeline");
  PipelineConfig c;
  c.lambda = r.num("lambda", c.lambda);
  c.sigma = r.num("sigma", c.sigma);
  if (r.has("minimize")) c.minimize = minimize_config_from_json(r.raw("minimize"));
  c.minimize.lambda = c.lambda;
  if (r.has("epsilon_override")) {
    const Json& e = r.raw("epsilon_override");
    if (e.is_number()) c.epsilon_override = e.get<double>();
    else if (!e.is_null()) throw SchemaError("pipeline.epsilon_override: expected a number or null");
  }
  r.finish();
  schema_guard("pipeline", [&] { c.validate(); return 0; });
  return c;
}

Json to_json(const CounterexampleConfig& c) {
  Json j;
  j["theta"] = c.theta;
  j["chart_radius"] = c.chart_radius;
  j["lambda"] = c.lambda;
  j["L"] = c.L;
  j["trunc_c"] = c.trunc_c;
  return j;
}

CounterexampleConfig counterexample_config_from_json(const Json& j, CounterexampleConfig c) {
  ObjectReader r(j, "counterexample");
  c.theta = r.num("theta", c.theta);
  c.chart_radius = r.num("chart_radius", c.chart_radius);
  c.lambda = r.num("lambda", c.lambda);
  c.L = r.integer("L", c.L);
  c.trunc_c = r.num("trunc_c", c.trunc_c);
  r.finish();
  schema_guard("counterexample", [&] { c.validate(); return 0; });
  return c;
}

Json to_json(const AlexConfig& c) { return Json{{"recenter", c.recenter}, {"p", c.p}}; }

AlexConfig alex_config_from_json(const Json& j) {
  ObjectReader r(j, "alexandrov");
  AlexConfig c;
  c.recenter = r.boolean("recenter", c.recenter);
  c.p = r.num("p", c.p);
  r.finish();
  if (!(c.p >= 1)) throw SchemaError("alexandrov.p: must be >= 1");
  return c;
}

// ---------------------------------------------------------------- reports

Json to_json(const CNorms& n) {
  return Json{{"linf", n.linf}, {"w1inf", n.w1inf}, {"c2", n.c2}, {"lap", n.lap}};
}

Json to_json(const StabilityReport& r) {
  Json j;
  j["lambda"] = r.lambda;
  j["perimeter_E"] = r.perimeter_E;
  j["perimeter_F"] = r.perimeter_F;
  j["volume_E"] = r.volume_E;
  j["volume_F"] = r.volume_F;
  j["symdiff_EF"] = r.symdiff_EF;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["convexity_margin_F"] = r.convexity_margin_F;
  j["v_norms"] = to_json(r.v_norms);
  j["c1_norm"] = r.c1_norm;
  j["c2_norm"] = r.c2_norm;
  j["in_class"] = r.in_class;
  return j;
}

Json to_json(const PipelineResult& r) {
  Json j;
  j["converged"] = r.min.converged;
  j["accepted"] = r.accepted;
  j["convex"] = r.convex;
  j["flag"] = r.flag;
  j["iterations"] = r.min.iterations;
  j["el_residual"] = r.min.el_residual;
  j["el_residual_pointwise"] = r.min.el_residual_pointwise;
  j["mu_hat"] = r.min.mu_hat;
  j["energy"] = r.min.energy;
  j["symdiff_EH"] = r.symdiff_EH;
  j["epsilon"] = r.epsilon;
  j["rho"] = r.rho;
  j["x0"] = vec(r.x0);
  j["c1_constant"] = r.c1_constant;
  j["report"] = to_json(r.report);
  return j;
}

Json to_json(const AlexReport& r) {
  Json j;
  j["w12_of_w"] = r.w12_of_w;
  j["mu_star"] = r.mu_star;
  j["mu_gap"] = r.mu_gap;
  j["wm12_of_S_minus_mu"] = r.wm12_of_S_minus_mu;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["ratio"] = r.ratio;
  j["ratio_defined"] = r.ratio_defined;
  j["symdiff_to_ball"] = r.symdiff_to_ball;
  j["inner_radius"] = r.radii.inner;
  j["outer_radius"] = r.radii.outer;
  j["p"] = r.p;
  j["lp_oscillation"] = r.lp_oscillation;
  j["w2p_proxy"] = r.w2p_proxy;
  j["sigma"] = r.sigma;
  j["first_mode_C"] = r.first_mode_C;
  j["mean_value_ratio"] = r.mean_value_ratio;
  j["mean_value_C"] = r.mean_value_C;
  j["shift"] = vec(r.shift);
  j["low_confidence"] = r.low_confidence;
  return j;
}

Json to_json(const PlaneReport& r) {
  Json j;
  j["area_E"] = r.area_E;
  j["perimeter_E"] = r.perimeter_E;
  j["area_hull"] = r.area_hull;
  j["perimeter_hull"] = r.perimeter_hull;
  j["hull_minus_E"] = r.hull_minus_E;
  j["lhs1"] = r.lhs1;
  j["rhs1"] = r.rhs1;
  j["slack1"] = r.slack1;
  j["theta"] = r.theta;
  j["area_hull_n"] = r.area_hull_n;
  j["perimeter_En"] = r.perimeter_En;
  j["perimeter_F"] = r.perimeter_F;
  j["symdiff_EF"] = r.symdiff_EF;
  j["lhs2"] = r.lhs2;
  j["rhs2"] = r.rhs2;
  j["slack2"] = r.slack2;
  j["small_hull"] = r.small_hull;
  j["origin"] = vec(r.origin);
  j["F_outside_hull"] = r.F_outside_hull;
  j["nested_defect"] = r.nested_defect;
  j["convex_input"] = r.convex_input;
  return j;
}

Json to_json(const NormBrackets& b) {
  return Json{{"linf", b.linf},         {"w1inf", b.w1inf},   {"lap", b.lap},       {"hess", b.hess},
              {"w1inf_ok", b.w1inf_ok}, {"lap_ok", b.lap_ok}, {"hess_ok", b.hess_ok}};
}

Json to_json(const SharpnessRow& r) {
  Json j;
  j["theta"] = r.theta;
  j["converged"] = r.converged;
  j["perimeter_E"] = r.perimeter_E;
  j["perimeter_F"] = r.perimeter_F;
  j["perimeter_B"] = r.perimeter_B;
  j["symdiff_EF"] = r.symdiff_EF;
  j["symdiff_EB"] = r.symdiff_EB;
  j["rho"] = r.rho;
  j["C_B"] = r.C_B;
  j["slack"] = r.slack;
  j["margin_E"] = r.margin_E;
  j["margin_F"] = r.margin_F;
  j["norms"] = to_json(r.norms);
  j["resolved"] = r.resolved;
  return j;
}

Json to_json(const SharpnessReport& r) {
  Json j;
  j["rows"] = Json::array();
  for (const auto& row : r.rows) j["rows"].push_back(to_json(row));
  j["excluded"] = r.excluded;
  j["rho_monotone"] = r.rho_monotone;
  j["fit_slope"] = r.fit_slope;
  j["fit_max"] = r.fit_max;
  j["linear_fails"] = r.linear_fails;
  j["summary"] = r.summary;
  return j;
}

// ---------------------------------------------------------------- corpus

Json entry_to_json(const CorpusEntry& e) {
  Json j;
  j["id"] = e.id;
  j["index"] = e.index;
  if (e.set) j["set"] = set_to_json(*e.set);
  if (e.polygon) j["polygon"] = polygon_to_json(*e.polygon);
  if (e.set && (e.axes != Eigen::Vector3d::Ones() || !e.rotation.isIdentity(0.0))) {
    j["axes"] = vec(e.axes);
    Json R = Json::array();
    for (int i = 0; i < 3; ++i) R.push_back({e.rotation(i, 0), e.rotation(i, 1), e.rotation(i, 2)});
    j["rotation"] = R;
  }
  return j;
}

CorpusEntry entry_from_json(const Json& j) {
  ObjectReader r(j, "entry");
  CorpusEntry e;
  e.id = r.str("id");
  e.index = r.integer("index");
  if (r.has("set")) e.set = set_from_json(r.raw("set"));
  if (r.has("polygon")) e.polygon = polygon_from_json(r.raw("polygon"));
  if (r.has("axes")) {
    const auto a = r.nums("axes");
    if (a.size() != 3) throw SchemaError("entry.axes: expected 3 numbers");
    e.axes = Eigen::Vector3d(a[0], a[1], a[2]);
    const Json& R = r.raw("rotation");
    if (!R.is_array() || R.size() != 3) throw SchemaError("entry.rotation: expected a 3x3 array");
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) e.rotation(i, k) = R.at(i).at(k).get<double>();
  }
  r.finish();
  if (bool(e.set) == bool(e.polygon)) throw SchemaError("entry " + e.id + ": needs exactly one of set, polygon");
  return e;
}

std::map<std::string, std::string> corpus_files(const CorpusSpec& spec, const std::vector<CorpusEntry>& entries) {
  std::map<std::string, std::string> files;
  Json members = Json::array();
  for (const auto& e : entries) {
    const std::string file = e.id + ".json";
    files[file] = dump(entry_to_json(e));
    members.push_back(file);
  }
  Json m;
  m["spec"] = to_json(spec);
  m["members"] = members;
  files["manifest.json"] = dump(m);
  return files;
}

void save_corpus(const fs::path& dir, const CorpusSpec& spec, const std::vector<CorpusEntry>& entries) {
  fs::create_directories(dir);
  for (const auto& [name, text] : corpus_files(spec, entries)) write_text_file(dir / name, text);
}

LoadedCorpus load_corpus(const fs::path& manifest) {
  const Json j = read_json_file(manifest);
  ObjectReader r(j, manifest.string());
  LoadedCorpus out;
  out.spec = corpus_spec_from_json(r.raw("spec"));
  const Json& members = r.raw("members");
  r.finish();
  if (!members.is_array()) throw SchemaError("manifest.members: expected an array");
  const fs::path base = manifest.parent_path();
  for (const auto& m : members) {
    if (!m.is_string()) throw SchemaError("manifest.members: expected file names");
    out.entries.push_back(entry_from_json(read_json_file(base / m.get<std::string>())));
  }
  return out;
}

}  // namespace nsph
