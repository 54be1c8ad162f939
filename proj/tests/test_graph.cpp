#include <catch2/catch_amalgamated.hpp>

#include "homocycle/homology.hpp"
#include "homocycle/io.hpp"
#include "homocycle/transfer.hpp"

using namespace homocycle;

namespace {

MultiGraph load(const std::string& name) {
  return parse_graph_file(std::string(HOMOCYCLE_SOURCE_DIR) + "/data/" + name);
}

}  // namespace

TEST_CASE("graph creation validation") {
  auto len = [](long long v) { return ExactLength::from_rational(v); };
  CHECK_THROWS_AS(MultiGraph::create({}, {}), ParseError);
  CHECK_THROWS_AS(
      MultiGraph::create({"v"}, {{"e", {"v", "w"}, len(1)}}),
      ParseError);  // unknown endpoint
  CHECK_THROWS_AS(
      MultiGraph::create({"v"}, {{"e", {"v", "v"}, len(1)},
                                 {"e", {"v", "v"}, len(1)}}),
      ParseError);  // duplicate id
  CHECK_THROWS_AS(
      MultiGraph::create({"v"}, {{"e", {"v", "v"}, len(0)}}),
      ParseError);  // nonpositive length
  CHECK_THROWS_AS(MultiGraph::create({"v", "v"}, {}),
                  ParseError);  // duplicate vertex
}

TEST_CASE("structure report") {
  auto g = load("loop_triangle.json");
  auto vr = validate_graph(g);
  CHECK(vr.connected);
  CHECK(!vr.bipartite);
  CHECK(vr.betti == 2);

  auto tl = validate_graph(load("loop_parallel.json"));
  CHECK(tl.connected);
  CHECK(!tl.bipartite);
  CHECK(tl.betti == 2);

  auto bp = validate_graph(load("bipartite_pair.json"));
  CHECK(bp.connected);
  CHECK(bp.bipartite);
  CHECK(bp.betti == 2);

  auto dc = validate_graph(load("disconnected.json"));
  CHECK(!dc.connected);

  // a loop makes any graph non-bipartite
  auto lg = validate_graph(load("rose2_unit.json"));
  CHECK(!lg.bipartite);
  CHECK(lg.betti == 2);
}

TEST_CASE("symbol table layout") {
  auto g = load("loop_parallel.json");
  SymbolTable st = SymbolTable::build(g);
  CHECK(st.m == 3);
  CHECK(st.n == 2);
  CHECK(st.symbols == 6);
  for (int s = 0; s < st.symbols; s += 2) {
    CHECK(SymbolTable::reverse(s) == s + 1);
    CHECK(SymbolTable::edge_of(s) == s / 2);
    CHECK(st.init[s] == st.term[s + 1]);
    CHECK(st.term[s] == st.init[s + 1]);
    CHECK(st.length[s] == st.length[s + 1]);
  }
  // loop: both endpoints at vertex 0; parallel pair crosses
  CHECK(st.init[0] == st.term[0]);
  CHECK(st.init[2] != st.term[2]);
}

TEST_CASE("oriented-double transition matrix, loop plus triangle") {
  // one loop at X and a directed triangle X->Y->Z->X on unit lengths
  auto g = load("loop_triangle.json");
  SymbolTable st = SymbolTable::build(g);
  Eigen::MatrixXi A = transition_matrix(st);
  REQUIRE(A.rows() == 8);
  const int want[8][8] = {
      {1, 1, 1, 0, 0, 0, 0, 1},
      {1, 1, 1, 0, 0, 0, 0, 1},
      {0, 0, 0, 1, 1, 0, 0, 0},
      {1, 1, 1, 0, 0, 0, 0, 1},
      {0, 0, 0, 0, 0, 1, 1, 0},
      {0, 0, 0, 1, 1, 0, 0, 0},
      {1, 1, 1, 0, 0, 0, 0, 1},
      {0, 0, 0, 0, 0, 1, 1, 0},
  };
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(A(i, j) == want[i][j]);
}

TEST_CASE("oriented-double transition matrix, two-loop graph") {
  auto g = load("loop_parallel.json");
  SymbolTable st = SymbolTable::build(g);
  Eigen::MatrixXi A = transition_matrix(st);
  REQUIRE(A.rows() == 6);
  const int want[6][6] = {
      {1, 1, 1, 0, 0, 1},
      {1, 1, 1, 0, 0, 1},
      {0, 0, 0, 1, 1, 0},
      {1, 1, 1, 0, 0, 1},
      {1, 1, 1, 0, 0, 1},
      {0, 0, 0, 1, 1, 0},
  };
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(A(i, j) == want[i][j]);
}

TEST_CASE("cycle-space labeling") {
  auto g = load("loop_triangle.json");
  SymbolTable st = SymbolTable::build(g);
  HomologyLabeling hl = HomologyLabeling::build(g, st);
  CHECK(hl.b == 2);

  // labels are antisymmetric under direction reversal
  for (int s = 0; s < st.symbols; s += 2)
    for (int c = 0; c < hl.b; ++c) CHECK(hl.f[s][c] == -hl.f[s + 1][c]);

  // tree edges carry zero label
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!hl.in_tree[e]) continue;
    for (int c = 0; c < hl.b; ++c) CHECK(hl.f[2 * e][c] == 0);
  }

  // the fundamental cycle of coordinate edge c maps to the unit vector e_c
  for (int c = 0; c < hl.b; ++c) {
    auto word = hl.fundamental_cycle(g, st, c);
    REQUIRE(!word.empty());
    // admissible closed walk
    for (std::size_t i = 0; i < word.size(); ++i) {
      int nxt = word[(i + 1) % word.size()];
      CHECK(st.term[word[i]] == st.init[nxt]);
    }
    auto cls = hl.class_of_walk(word);
    for (int d = 0; d < hl.b; ++d) CHECK(cls[d] == (d == c ? 1 : 0));
  }

  // backtracking word is null-homologous
  auto cls0 = hl.class_of_walk({0, 1});
  CHECK(cls0 == std::vector<int>(hl.b, 0));
}

TEST_CASE("labelings from different edge orders differ by a unimodular map") {
  auto g = load("loop_triangle.json");
  SymbolTable st = SymbolTable::build(g);
  HomologyLabeling h1 = HomologyLabeling::build(g, st);
  std::vector<int> order = {3, 2, 1, 0};
  HomologyLabeling h2 = HomologyLabeling::build(g, st, &order);
  Eigen::MatrixXi U = change_of_basis(g, st, h1, h2);
  long long det =
      static_cast<long long>(U(0, 0)) * U(1, 1) -
      static_cast<long long>(U(0, 1)) * U(1, 0);
  CHECK((det == 1 || det == -1));

  // classes transform through U on a sample of closed walks
  std::vector<std::vector<int>> walks = {
      {0}, {0, 1}, {2, 4, 6}, {0, 2, 4, 6}};
  for (const auto& w : walks) {
    auto c1 = h1.class_of_walk(w);
    auto c2 = h2.class_of_walk(w);
    for (int i = 0; i < h2.b; ++i) {
      int acc = 0;
      for (int j = 0; j < h1.b; ++j) acc += U(i, j) * c1[j];
      CHECK(acc == c2[i]);
    }
  }
}
