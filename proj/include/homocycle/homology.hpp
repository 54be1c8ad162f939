#pragma once

#include <queue>
#include <vector>

#include <Eigen/Dense>

#include "homocycle/graph.hpp"

namespace homocycle {

// Integer homology labeling of the oriented double.  A BFS spanning tree is
// grown from the first vertex (edges scanned in document order); every
// non-tree edge contributes one coordinate and its forward symbol is labeled
// with the corresponding standard basis vector, the reverse with its negative.
// Tree symbols carry the zero vector, so the class of a closed walk is the
// signed count of non-tree edge crossings.
struct HomologyLabeling {
  int b = 0;
  std::vector<char> in_tree;            // per edge
  std::vector<int> coord_of_edge;       // per edge, -1 for tree edges
  std::vector<int> coord_edge;          // per coordinate, its edge
  std::vector<std::vector<int>> f;      // per symbol, b entries in {-1,0,1}
  std::vector<int> parent_vertex;       // BFS tree, -1 at the root
  std::vector<int> parent_edge;
  std::vector<int> depth;

  // g must be connected.  An explicit edge permutation lets tests exercise
  // alternative spanning trees without rebuilding the document.
  static HomologyLabeling build(const MultiGraph& g, const SymbolTable& st,
                                const std::vector<int>* edge_order = nullptr) {
    const int n = g.vertex_count(), m = g.edge_count();
    std::vector<int> order(m);
    if (edge_order) {
      order = *edge_order;
      if (static_cast<int>(order.size()) != m)
        throw InternalError("edge order size mismatch");
    } else {
      for (int e = 0; e < m; ++e) order[e] = e;
    }

    HomologyLabeling hl;
    hl.in_tree.assign(m, 0);
    hl.coord_of_edge.assign(m, -1);
    hl.parent_vertex.assign(n, -1);
    hl.parent_edge.assign(n, -1);
    hl.depth.assign(n, 0);

    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (other, edge)
    for (int e : order) {
      int a = g.vertex_index(g.edges()[e].ends[0]);
      int bb = g.vertex_index(g.edges()[e].ends[1]);
      adj[a].push_back({bb, e});
      if (a != bb) adj[bb].push_back({a, e});
    }

    std::vector<char> seen(n, 0);
    std::queue<int> bfs;
    seen[0] = 1;
    bfs.push(0);
    int reached = 1;
    while (!bfs.empty()) {
      int v = bfs.front();
      bfs.pop();
      for (auto [w, e] : adj[v]) {
        if (seen[w]) continue;
        seen[w] = 1;
        hl.in_tree[e] = 1;
        hl.parent_vertex[w] = v;
        hl.parent_edge[w] = e;
        hl.depth[w] = hl.depth[v] + 1;
        ++reached;
        bfs.push(w);
      }
    }
    if (reached != n)
      throw InadmissibleError("graph is not connected");

    for (int e = 0; e < m; ++e) {
      if (!hl.in_tree[e]) {
        hl.coord_of_edge[e] = hl.b++;
        hl.coord_edge.push_back(e);
      }
    }

    hl.f.assign(st.symbols, std::vector<int>(hl.b, 0));
    for (int e = 0; e < m; ++e) {
      int c = hl.coord_of_edge[e];
      if (c < 0) continue;
      hl.f[2 * e][c] = 1;
      hl.f[2 * e + 1][c] = -1;
    }
    return hl;
  }

  std::vector<int> class_of_walk(const std::vector<int>& word) const {
    std::vector<int> alpha(b, 0);
    for (int s : word) {
      for (int c = 0; c < b; ++c) alpha[c] += f[s][c];
    }
    return alpha;
  }

  // Closed walk representing coordinate c: the non-tree edge forward, then
  // the tree path from its head back to its tail.
  std::vector<int> fundamental_cycle(const MultiGraph& g, const SymbolTable& st,
                                     int c) const {
    int e = coord_edge.at(c);
    int tail = g.vertex_index(g.edges()[e].ends[0]);
    int head = g.vertex_index(g.edges()[e].ends[1]);
    std::vector<int> word{2 * e};

    auto step_up = [&](int v) {
      int pe = parent_edge[v];
      int pv = parent_vertex[v];
      int fwd = 2 * pe;  // stored orientation tail(pe) -> head(pe)
      int sym = (st.init[fwd] == v && st.term[fwd] == pv)
                    ? fwd
                    : SymbolTable::reverse(fwd);
      return std::pair<int, int>{sym, pv};
    };

    std::vector<int> up_from_head, down_to_tail;
    int x = head, y = tail;
    while (depth[x] > depth[y]) {
      auto [sym, nv] = step_up(x);
      up_from_head.push_back(sym);
      x = nv;
    }
    while (depth[y] > depth[x]) {
      auto [sym, nv] = step_up(y);
      down_to_tail.push_back(SymbolTable::reverse(sym));
      y = nv;
    }
    while (x != y) {
      auto [sx, nx] = step_up(x);
      up_from_head.push_back(sx);
      x = nx;
      auto [sy, ny] = step_up(y);
      down_to_tail.push_back(SymbolTable::reverse(sy));
      y = ny;
    }
    word.insert(word.end(), up_from_head.begin(), up_from_head.end());
    word.insert(word.end(), down_to_tail.rbegin(), down_to_tail.rend());
    return word;
  }
};

// U maps classes in the `from` labeling to classes in the `to` labeling:
// column c is the `to`-class of `from`'s c-th fundamental cycle.  Always
// unimodular for labelings of the same graph.
inline Eigen::MatrixXi change_of_basis(const MultiGraph& g,
                                       const SymbolTable& st,
                                       const HomologyLabeling& from,
                                       const HomologyLabeling& to) {
  if (from.b != to.b) throw InternalError("labelings have different rank");
  Eigen::MatrixXi U(to.b, from.b);
  for (int c = 0; c < from.b; ++c) {
    auto word = from.fundamental_cycle(g, st, c);
    auto alpha = to.class_of_walk(word);
    for (int r = 0; r < to.b; ++r) U(r, c) = alpha[r];
  }
  double det = U.cast<double>().determinant();
  long long deti = std::llround(det);
  if (deti != 1 && deti != -1)
    throw InternalError("change of basis is not unimodular");
  return U;
}

}  // namespace homocycle
