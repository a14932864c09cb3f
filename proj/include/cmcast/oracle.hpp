#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cmcast/coloring.hpp"
#include "cmcast/conflict_graph.hpp"

namespace cmcast {

struct OracleResult {
  int chi = 0;
  Coloring witness;
};

namespace detail {

// Greedy first-fit in the given order; returns the color count.
inline int first_fit(const ConflictGraph& g, const std::vector<int>& order,
                     Coloring& out) {
  out = Coloring::empty(g.num_vertices());
  int palette = 0;
  for (int i : order) {
    std::vector<char> seen(static_cast<std::size_t>(palette) + 1, 0);
    for (int j : g.adj(i)) {
      const int cj = out.color[static_cast<std::size_t>(j)];
      if (cj != Coloring::kUncolored && cj < static_cast<int>(seen.size()))
        seen[static_cast<std::size_t>(cj)] = 1;
    }
    int c = 0;
    while (c < palette && seen[static_cast<std::size_t>(c)]) ++c;
    out.color[static_cast<std::size_t>(i)] = c;
    palette = std::max(palette, c + 1);
  }
  out.num_colors = palette;
  return palette;
}

// Greedily grown clique starting from the highest-degree vertex; a lower
// bound on chi.
inline int greedy_clique(const ConflictGraph& g, const std::vector<int>& order) {
  std::vector<int> clique;
  for (int v : order) {
    bool ok = true;
    for (int c : clique)
      if (!g.has_edge(v, c)) {
        ok = false;
        break;
      }
    if (ok) clique.push_back(v);
  }
  return static_cast<int>(clique.size());
}

struct ChiSearch {
  const ConflictGraph& g;
  const std::vector<int>& order;
  std::vector<int> assign;  // by position in `order`
  int best;
  std::vector<int> best_assign;
  int lower;

  void run(std::size_t pos, int used) {
    if (used >= best) return;
    if (pos == order.size()) {
      best = used;
      best_assign = assign;
      return;
    }
    const int v = order[pos];
    for (int c = 0; c < std::min(used + 1, best - 1) + 0; ++c) {
      bool ok = true;
      for (std::size_t q = 0; q < pos; ++q) {
        if (assign[q] == c && g.has_edge(v, order[q])) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      assign[pos] = c;
      run(pos + 1, std::max(used, c + 1));
      if (best == lower) return;  // already optimal
    }
    assign[pos] = -1;
  }
};

}  // namespace detail

// Exact chromatic number by branch-and-bound backtracking, for test oracles
// only. Refuses graphs above 20 vertices.
inline OracleResult chromatic_number(const ConflictGraph& g) {
  const int V = g.num_vertices();
  if (V > 20) throw std::invalid_argument("chromatic_number: graph too large (cap 20)");
  OracleResult res;
  if (V == 0) {
    res.chi = 0;
    res.witness = Coloring::empty(0);
    return res;
  }
  std::vector<int> order(static_cast<std::size_t>(V));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  Coloring greedy;
  int upper = detail::first_fit(g, order, greedy);
  const int lower = detail::greedy_clique(g, order);
  if (lower == upper) {
    res.chi = upper;
    res.witness = greedy;
    return res;
  }
  detail::ChiSearch search{g, order, std::vector<int>(static_cast<std::size_t>(V), -1),
                           upper + 1, {}, lower};
  // seed the search with the greedy solution as incumbent
  search.best = upper;
  search.best_assign.resize(static_cast<std::size_t>(V));
  for (int pos = 0; pos < V; ++pos)
    search.best_assign[static_cast<std::size_t>(pos)] =
        greedy.color[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])];
  search.run(0, 0);
  res.chi = search.best;
  res.witness = Coloring::empty(V);
  for (int pos = 0; pos < V; ++pos)
    res.witness.color[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] =
        search.best_assign[static_cast<std::size_t>(pos)];
  res.witness.num_colors = search.best;
  return res;
}

}  // namespace cmcast
