#include <catch2/catch_amalgamated.hpp>

#include "homocycle/diagnostics.hpp"
#include "homocycle/io.hpp"

using namespace homocycle;

namespace {

MultiGraph load(const std::string& name) {
  return parse_graph_file(std::string(HOMOCYCLE_SOURCE_DIR) + "/data/" + name);
}

std::vector<PrimCycle> cycles_of(const MultiGraph& g, int depth) {
  SymbolTable st = SymbolTable::build(g);
  HomologyLabeling hl = HomologyLabeling::build(g, st);
  LengthClasses lc = LengthClasses::build(st);
  return dfs_oracle(st, hl, lc, depth);
}

MultiGraph rose_with(std::vector<ExactLength> lengths) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    edges.push_back(
        {"e" + std::to_string(i + 1), {"v", "v"}, std::move(lengths[i])});
  return MultiGraph::create({"v"}, std::move(edges));
}

}  // namespace

TEST_CASE("integer lengths form a lattice") {
  auto cyc = cycles_of(load("rose2_unit.json"), 6);
  WeakMixingReport rep = condition_lattice(cyc);
  CHECK(rep.lattice);
  REQUIRE(rep.delta.has_value());
  CHECK(*rep.delta == ExactLength::from_rational(1));
  CHECK(rep.distinct_lengths == 6);  // lengths 1..6

  // common scale 2: loops of lengths 2 and 4
  auto g = rose_with({ExactLength::from_rational(2),
                      ExactLength::from_rational(4)});
  WeakMixingReport r2 = condition_lattice(cycles_of(g, 4));
  CHECK(r2.lattice);
  CHECK(*r2.delta == ExactLength::from_rational(2));

  // rational lengths still generate a discrete group
  auto g3 = rose_with({ExactLength::from_rational(rational(3, 2)),
                       ExactLength::from_rational(rational(5, 4))});
  WeakMixingReport r3 = condition_lattice(cycles_of(g3, 4));
  CHECK(r3.lattice);
  CHECK(*r3.delta == ExactLength::from_rational(rational(1, 4)));
}

TEST_CASE("irrational ratios break the lattice") {
  auto cyc = cycles_of(load("rose2_sqrt2.json"), 6);
  WeakMixingReport rep = condition_lattice(cyc);
  CHECK(!rep.lattice);
  CHECK(!rep.delta.has_value());

  WeakMixingReport g = condition_lattice(cycles_of(load("golden_rose3.json"), 5));
  CHECK(!g.lattice);
}

TEST_CASE("length-difference ratio of the nonarithmetic rose") {
  auto cyc = cycles_of(load("rose2_sqrt2.json"), 6);
  DiophantineDiagnostic d = condition_b(cyc, 20);
  REQUIRE(d.conclusive);
  CHECK(d.shortest[0] == ExactLength::from_rational(1));
  CHECK(d.shortest[1] == ExactLength::surd(1));
  CHECK(d.shortest[2] == ExactLength::from_rational(2));
  CHECK(d.xi == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(!d.xi_rational);
  REQUIRE(d.quotients.size() >= 10);
  // 1/sqrt2 = [0; 1, 2, 2, 2, ...]
  CHECK(d.quotients[0] == 0);
  CHECK(d.quotients[1] == 1);
  for (std::size_t i = 2; i < 10; ++i) CHECK(d.quotients[i] == 2);
  CHECK(d.max_quotient == 2);
}

TEST_CASE("golden-ratio spacing has all partial quotients 1") {
  auto cyc = cycles_of(load("golden_rose3.json"), 4);
  DiophantineDiagnostic d = condition_b(cyc, 25);
  REQUIRE(d.conclusive);
  CHECK(!d.xi_rational);
  CHECK(d.xi == Catch::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  REQUIRE(d.quotients.size() >= 15);
  for (std::size_t i = 0; i < 15; ++i) CHECK(d.quotients[i] == 1);
  CHECK(d.max_quotient == 1);
}

TEST_CASE("rational ratio terminates the expansion") {
  auto g = rose_with({ExactLength::from_rational(1),
                      ExactLength::from_rational(rational(3, 2)),
                      ExactLength::from_rational(rational(7, 4))});
  DiophantineDiagnostic d = condition_b(cycles_of(g, 3), 20);
  REQUIRE(d.conclusive);
  CHECK(d.xi_rational);
  // gaps 1/2 and 1/4 give ratio exactly 2
  CHECK(d.xi == Catch::Approx(2.0));
  REQUIRE(d.quotients.size() == 1);
  CHECK(d.quotients[0] == 2);
}

TEST_CASE("too few lengths is inconclusive") {
  auto cyc = cycles_of(load("rose2_unit.json"), 1);  // all cycles length 1
  DiophantineDiagnostic d = condition_b(cyc, 10);
  CHECK(!d.conclusive);
  WeakMixingReport w = condition_lattice({});
  CHECK(!w.lattice);
  CHECK(w.distinct_lengths == 0);
}
