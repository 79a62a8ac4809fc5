#include "doctest.h"
#include "test_util.hpp"

#include "nearsphere/io.hpp"
#include "nearsphere/report.hpp"

#include <filesystem>

using namespace nsph;

TEST_CASE("field and set round trip exactly") {
  testutil::Rng rng(5);
  for (int n : {2, 3}) {
    auto u = testutil::random_coeffs(rng, n, 6, 0.01, 2.0);
    Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(n, 0.1, 0.3);
    auto E = make_set(u, c);
    auto F = set_from_json(Json::parse(dump(set_to_json(E))));
    CHECK((F.u.a - E.u.a).norm() == 0.0);
    CHECK((F.center - E.center).norm() == 0.0);
    // grid representation: node values at the native grid
    auto g = make_grid(n, 6);
    Json j{{"n", n}, {"L", 6}, {"repr", "grid"}, {"data", synthesize(u, g).values}};
    CHECK((field_from_json(j).a - u.a).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("coefficient order is degree then order") {
  SpectralCoeffs u(3, 2);
  u(1, -1) = 1;
  u(2, 2) = 2;
  auto j = field_to_json(u);
  CHECK(j["data"][1].get<double>() == 1.0);
  CHECK(j["data"][8].get<double>() == 2.0);
}

TEST_CASE("strict readers") {
  Json f{{"n", 3}, {"L", 1}, {"repr", "spectral"}, {"data", {0, 0, 0, 0}}};
  CHECK_NOTHROW(field_from_json(f));
  auto bad = f;
  bad["extra"] = 1;
  CHECK_THROWS_AS(field_from_json(bad), SchemaError);
  bad = f;
  bad["data"] = {0, 0};
  CHECK_THROWS_AS(field_from_json(bad), SchemaError);
  bad = f;
  bad["L"] = "one";
  CHECK_THROWS_AS(field_from_json(bad), SchemaError);
  CHECK_THROWS_AS(corpus_spec_from_json(Json{{"kind", "blob"}}), SchemaError);
  CHECK_THROWS_AS(corpus_spec_from_json(Json{{"kind", "ellipsoidal"}, {"sigma", 0.9}}), SchemaError);
  CHECK_THROWS_AS(pipeline_config_from_json(Json{{"lambda", 0.5}}), SchemaError);
  CHECK_THROWS_AS(polygon_from_json(Json{{"vertices", {{0, 0}, {1, 1}, {1, 0}, {0, 1}}}}), SchemaError);
  auto pc = pipeline_config_from_json(Json{{"lambda", 0.05}, {"minimize", {{"L", 12}}}});
  CHECK(pc.minimize.lambda == 0.05);
  CHECK(pc.minimize.L == 12);
}

TEST_CASE("corpus save and load") {
  const auto dir = std::filesystem::temp_directory_path() / "nsph_test_io_corpus";
  std::filesystem::remove_all(dir);
  for (auto kind : {CorpusKind::Ellipsoidal, CorpusKind::PlanarStar}) {
    CorpusSpec s;
    s.kind = kind;
    s.count = 3;
    s.L = 8;
    s.sigma = 0.1;
    auto entries = generate(s);
    save_corpus(dir, s, entries);
    const std::string first = read_text_file(dir / "manifest.json");
    auto back = load_corpus(dir / "manifest.json");
    REQUIRE(back.entries.size() == 3);
    CHECK(dump(to_json(back.spec)) == dump(to_json(s)));
    for (int i = 0; i < 3; ++i) {
      CHECK(dump(entry_to_json(back.entries[i])) == dump(entry_to_json(entries[i])));
      CHECK(read_text_file(dir / (entries[i].id + ".json")) == dump(entry_to_json(entries[i])));
    }
    save_corpus(dir, s, generate(s));
    CHECK(read_text_file(dir / "manifest.json") == first);
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("csv flattening") {
  std::vector<Json> recs{Json{{"a", 1}, {"b", {{"c", 0.1}, {"d", true}}}, {"v", {1.5, 2}}, {"s", "x,y"}},
                         Json{{"a", 2}, {"b", {{"c", -1e-300}, {"d", false}}}, {"v", {0, 0}}, {"s", "q"}}};
  CHECK(records_to_csv(recs) == "a,b.c,b.d,v,s\n1,0.1,1,1.5;2,\"x,y\"\n2,-1e-300,0,0;0,q\n");
  recs[1].erase("s");
  CHECK_THROWS_AS(records_to_csv(recs), std::invalid_argument);
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("svg output") {
  Chart c;
  c.title = "a<b";
  c.series.push_back({"s", {1, 2, 3}, {1, 4, 9}});
  c.series.push_back({"p", {1, 2}, {0, -1}, true});
  const std::string s = render_svg(c);
  CHECK(s.rfind("<?xml", 0) == 0);
  CHECK(s.find("a&lt;b") != std::string::npos);
  CHECK(s.find("<polyline") != std::string::npos);
  CHECK(s.find("<circle") != std::string::npos);
  CHECK(s.find("generated") == std::string::npos);
  CHECK(render_svg(c) == s);
  c.timestamp = true;
  CHECK(render_svg(c).find("<!-- generated") != std::string::npos);
  Eigen::Matrix2Xd v(2, 3);
  v << 0, 1, 0, 0, 0, 1;
  CHECK(render_polygons_svg({{make_polygon(v), "", "", "E"}}, "t").find("<polygon") != std::string::npos);
}
