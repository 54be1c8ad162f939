#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "homocycle/io.hpp"

using namespace homocycle;

namespace {

std::string data(const std::string& name) {
  return std::string(HOMOCYCLE_SOURCE_DIR) + "/data/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int run_cli(const std::string& args, std::string* out = nullptr) {
  std::string tmp = "/tmp/homocycle_cli_test_out.txt";
  std::string cmd =
      std::string(HOMOCYCLE_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
  int rc = std::system(cmd.c_str());
  if (out) *out = slurp(tmp);
  std::remove(tmp.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("json numeric forms parse exactly") {
  CHECK(parse_rational_json(json(7), "x") == rational(7));
  CHECK(parse_rational_json(json(-2), "x") == rational(-2));
  CHECK(parse_rational_json(json(0.5), "x") == rational(1, 2));
  CHECK(parse_rational_json(json::parse("\"5/4\""), "x") == rational(5, 4));
  CHECK_THROWS_AS(parse_rational_json(json::parse("[1]"), "x"), ParseError);
  CHECK_THROWS_AS(parse_rational_json(json::parse("\"x\""), "x"), ParseError);

  ExactLength a = parse_length(json(2), "len");
  CHECK(a == ExactLength::from_rational(2));
  ExactLength b = parse_length(json::parse("{\"q0\":\"1\",\"q1\":\"1/2\"}"),
                               "len");
  CHECK(b.q[0] == 1);
  CHECK(b.q[1] == rational(1, 2));
  CHECK_THROWS_AS(parse_length(json::parse("{\"q7\":1}"), "len"), ParseError);
}

TEST_CASE("graph documents round-trip") {
  std::string text = slurp(data("golden_rose3.json"));
  MultiGraph g = parse_graph(text);
  CHECK(g.vertex_count() == 1);
  CHECK(g.edge_count() == 3);
  CHECK(g.edges()[1].length.str() == "11/10 + 1/10*sqrt5");

  json doc = graph_to_json(g);
  MultiGraph g2 = parse_graph(doc.dump());
  REQUIRE(g2.edge_count() == g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(g2.edges()[e].id == g.edges()[e].id);
    CHECK(g2.edges()[e].ends[0] == g.edges()[e].ends[0]);
    CHECK(g2.edges()[e].ends[1] == g.edges()[e].ends[1]);
    CHECK(g2.edges()[e].length == g.edges()[e].length);
  }
  CHECK(graph_hash(g2) == graph_hash(g));
}

TEST_CASE("graph document rejection") {
  CHECK_THROWS_AS(parse_graph("not json"), ParseError);
  CHECK_THROWS_AS(parse_graph("{}"), ParseError);
  CHECK_THROWS_AS(
      parse_graph(R"({"vertices":["v"],"edges":[{"id":"e","ends":["v","w"],"length":1}]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_graph(R"({"vertices":["v"],"edges":[{"id":"e","ends":["v"],"length":1}]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_graph(R"({"vertices":["v"],"edges":[{"id":"e","ends":["v","v"]}]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_graph(R"({"vertices":["v"],"edges":[{"id":"e","ends":["v","v"],"length":0}]})"),
      ParseError);
}

TEST_CASE("input hash tracks content, not formatting") {
  std::string text = slurp(data("rose2_unit.json"));
  MultiGraph g1 = parse_graph(text);
  // same document with reordered keys and different whitespace
  std::string shuffled = R"({
    "edges": [
      {"length": 1, "ends": ["v", "v"], "id": "e1"},
      {"ends": ["v", "v"], "length": 1, "id": "e2"}
    ],
    "vertices": ["v"],
    "name": "renamed"
  })";
  MultiGraph g2 = parse_graph(shuffled);
  CHECK(graph_hash(g1) == graph_hash(g2));

  MultiGraph g3 = parse_graph(slurp(data("rose2_sqrt2.json")));
  CHECK(graph_hash(g1) != graph_hash(g3));
}

TEST_CASE("analysis configuration") {
  AnalysisConfig c;
  c.alpha_radius = 5;
  c.t_grid = {4, 6};
  json j = config_to_json(c);
  AnalysisConfig c2 = config_from_json(j);
  CHECK(c2.alpha_radius == 5);
  CHECK(c2.t_grid == std::vector<double>{4, 6});
  CHECK(c2.mode == Mode::Normalized);

  AnalysisConfig bad;
  bad.alpha_radius = 99;
  CHECK_THROWS_AS(validate_config(bad), ParseError);
  bad = AnalysisConfig{};
  bad.step_u = 0;
  CHECK_THROWS_AS(validate_config(bad), ParseError);
  bad = AnalysisConfig{};
  bad.t_grid = {8, -1};
  CHECK_THROWS_AS(validate_config(bad), ParseError);
  CHECK_THROWS_AS(mode_from_name("fancy"), ParseError);
}

TEST_CASE("doubles print round-trip faithfully") {
  for (double v : {0.1, 1.0 / 3.0, 2.2250738585072014e-308, 12345.678901234567,
                   -1.4142135623730951}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("census table round-trips through csv") {
  std::vector<CensusCsvRow> rows;
  rows.push_back({8.0, {0, 0}, bigint(684)});
  rows.push_back({10.0, {-1, 2}, bigint("123456789012345678901234567890")});
  json cfg = config_to_json(AnalysisConfig{});
  std::string text = emit_census_csv(rows, 2, cfg, "0123456789abcdef");

  json cfg2;
  std::string hash;
  auto back = parse_census_csv(text, &cfg2, &hash);
  CHECK(hash == "0123456789abcdef");
  CHECK(cfg2 == cfg);
  REQUIRE(back.size() == 2);
  CHECK(back[0].T == 8.0);
  CHECK(back[0].alpha == std::vector<int>{0, 0});
  CHECK(back[0].count == 684);
  CHECK(back[1].count == bigint("123456789012345678901234567890"));
}

TEST_CASE("comparison table round-trips through csv") {
  std::vector<VerifyCsvRow> rows;
  rows.push_back({18.0, {1, -1}, bigint(951850), 1466613.5889528312,
                  1078109.974351621, 0.35098787630924294,
                  0.11711233302294061});
  json cfg = config_to_json(AnalysisConfig{});
  json flags = {{"lattice_warning", false}, {"first_order_beats_zeroth", true}};
  std::string text = emit_verify_csv(rows, 2, cfg, "feedbeef00000000", flags);

  json cfg2, flags2;
  std::string hash;
  auto back = parse_verify_csv(text, &cfg2, &hash, &flags2);
  CHECK(flags2 == flags);
  REQUIRE(back.size() == 1);
  CHECK(back[0].pi == 951850);
  CHECK(back[0].pred0 == 1466613.5889528312);
  CHECK(back[0].res1 == 0.11711233302294061);
}

TEST_CASE("command-line exit codes") {
  std::string out;
  CHECK(run_cli("analyze " + data("rose2_unit.json"), &out) == 0);
  CHECK(out.find("\"entropy\"") != std::string::npos);

  CHECK(run_cli("analyze /does/not/exist.json", &out) == 1);
  CHECK(run_cli("analyze " + data("bipartite_pair.json"), &out) == 2);
  CHECK(out.find("bipartite") != std::string::npos);
  CHECK(run_cli("analyze " + data("disconnected.json")) == 2);
  CHECK(run_cli("census " + data("golden_rose3.json") +
                " --tmax 18 --budget-mb 4") == 3);
  CHECK(run_cli("oracle " + data("loop_triangle.json")) == 2);
  CHECK(run_cli("analyze " + data("rose2_unit.json") + " --alpha-radius 99") ==
        1);
  CHECK(run_cli("analyze " + data("rose2_unit.json") + " --no-such-flag") == 1);
  CHECK(run_cli("") == 1);
}

TEST_CASE("command output is deterministic and honors --out") {
  std::string a, b;
  REQUIRE(run_cli("analyze " + data("rose2_sqrt2.json"), &a) == 0);
  REQUIRE(run_cli("analyze " + data("rose2_sqrt2.json"), &b) == 0);
  CHECK(a == b);

  std::string path = "/tmp/homocycle_out_test.csv";
  REQUIRE(run_cli("census " + data("rose2_unit.json") +
                  " --tmax 8 --alpha-radius 1 --out " + path) == 0);
  std::string file = slurp(path);
  std::remove(path.c_str());
  auto rows = parse_census_csv(file);
  CHECK(rows.size() == 9);
  for (const auto& r : rows) CHECK(r.T == 8.0);
}

TEST_CASE("verify output carries trend flags") {
  std::string text;
  REQUIRE(run_cli("verify " + data("rose2_sqrt2.json") +
                  " --tmax 12 --alpha-radius 1", &text) == 0);
  json cfg, flags;
  std::string hash;
  auto rows = parse_verify_csv(text, &cfg, &hash, &flags);
  CHECK(!hash.empty());
  CHECK(flags.contains("lattice_warning"));
  CHECK(flags["lattice_warning"].get<bool>() == false);
  CHECK(rows.size() == 3 * 9);
  // residuals in the file re-derive from the stored columns
  for (const auto& r : rows) {
    double pid = static_cast<double>(r.pi);
    CHECK(r.res0 ==
          Catch::Approx(std::abs(pid - r.pred0) / r.pred0).epsilon(1e-12));
  }
}
