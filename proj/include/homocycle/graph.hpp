#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "homocycle/exact.hpp"

namespace homocycle {

struct Edge {
  std::string id;
  std::array<std::string, 2> ends;  // stored orientation: ends[0] -> ends[1]
  ExactLength length;
};

// Finite weighted multigraph.  Loops and parallel edges are allowed; edge and
// vertex order is the document order and is semantically meaningful (it fixes
// the symbol numbering and the spanning-tree tie-break).
class MultiGraph {
 public:
  static MultiGraph create(std::vector<std::string> vertices,
                           std::vector<Edge> edges) {
    MultiGraph g;
    g.vertices_ = std::move(vertices);
    g.edges_ = std::move(edges);
    if (g.vertices_.empty()) throw ParseError("graph has no vertices");
    if (g.edges_.empty()) throw ParseError("graph has no edges");
    std::map<std::string, int> vidx;
    for (int i = 0; i < static_cast<int>(g.vertices_.size()); ++i) {
      if (g.vertices_[i].empty()) throw ParseError("empty vertex id");
      if (!vidx.emplace(g.vertices_[i], i).second)
        throw ParseError("duplicate vertex id '" + g.vertices_[i] + "'");
    }
    std::map<std::string, int> eidx;
    for (int e = 0; e < static_cast<int>(g.edges_.size()); ++e) {
      const Edge& ed = g.edges_[e];
      if (ed.id.empty()) throw ParseError("empty edge id");
      if (!eidx.emplace(ed.id, e).second)
        throw ParseError("duplicate edge id '" + ed.id + "'");
      for (const auto& v : ed.ends) {
        if (!vidx.count(v))
          throw ParseError("edge '" + ed.id + "' references unknown vertex '" +
                           v + "'");
      }
      if (ed.length.sign() <= 0)
        throw ParseError("edge '" + ed.id + "' must have positive length");
    }
    g.vertex_index_ = std::move(vidx);
    return g;
  }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  int vertex_index(const std::string& name) const {
    auto it = vertex_index_.find(name);
    if (it == vertex_index_.end())
      throw InternalError("unknown vertex '" + name + "'");
    return it->second;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::map<std::string, int> vertex_index_;
};

struct ValidationReport {
  bool connected = false;
  bool bipartite = false;
  int betti = 0;  // first Betti number m - n + c
};

inline ValidationReport validate_graph(const MultiGraph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge)
  for (int e = 0; e < g.edge_count(); ++e) {
    int a = g.vertex_index(g.edges()[e].ends[0]);
    int b = g.vertex_index(g.edges()[e].ends[1]);
    adj[a].push_back({b, e});
    adj[b].push_back({a, e});
  }
  std::vector<int> color(n, -1);
  int components = 0;
  bool bipartite = true;
  for (int s = 0; s < n; ++s) {
    if (color[s] >= 0) continue;
    ++components;
    color[s] = 0;
    std::queue<int> bfs;
    bfs.push(s);
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      for (auto [w, e] : adj[v]) {
        if (color[w] < 0) {
          color[w] = 1 - color[v];
          bfs.push(w);
        } else if (color[w] == color[v]) {
          bipartite = false;  // covers loops (w == v) as well
        }
      }
    }
  }
  ValidationReport r;
  r.connected = (components == 1);
  r.bipartite = bipartite;
  r.betti = g.edge_count() - n + components;
  return r;
}

// Oriented double of the edge set.  Edge e (0-based) yields symbol 2e for the
// stored orientation ends[0] -> ends[1] and symbol 2e+1 for its reversal, so
// in 1-based display numbering edge i occupies symbols 2i-1 and 2i.
struct SymbolTable {
  int m = 0;          // edges
  int n = 0;          // vertices
  int symbols = 0;    // 2m
  std::vector<int> init, term;       // per symbol, vertex indices
  std::vector<ExactLength> length;   // per symbol (shared between directions)
  std::vector<double> length_d;

  static SymbolTable build(const MultiGraph& g) {
    SymbolTable st;
    st.m = g.edge_count();
    st.n = g.vertex_count();
    st.symbols = 2 * st.m;
    st.init.resize(st.symbols);
    st.term.resize(st.symbols);
    st.length.resize(st.symbols);
    st.length_d.resize(st.symbols);
    for (int e = 0; e < st.m; ++e) {
      int a = g.vertex_index(g.edges()[e].ends[0]);
      int b = g.vertex_index(g.edges()[e].ends[1]);
      st.init[2 * e] = a;
      st.term[2 * e] = b;
      st.init[2 * e + 1] = b;
      st.term[2 * e + 1] = a;
      st.length[2 * e] = st.length[2 * e + 1] = g.edges()[e].length;
      st.length_d[2 * e] = st.length_d[2 * e + 1] =
          g.edges()[e].length.to_double();
    }
    return st;
  }

  static int reverse(int s) { return s ^ 1; }
  static int edge_of(int s) { return s >> 1; }
  static bool is_forward(int s) { return (s & 1) == 0; }
};

}  // namespace homocycle
