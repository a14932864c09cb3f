#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cmcast/coloring.hpp"
#include "cmcast/conflict_graph.hpp"
#include "cmcast/rng.hpp"

namespace cmcast {

struct GraspParams {
  int max_iterations = 100;
  std::optional<double> fixed_beta;  // per-iteration uniform [0,1] when unset
  std::uint64_t seed = 1;
  bool adaptive_greedy = true;  // g(i) = degree among uncolored; false = static d(i)
};

struct RclState {
  double g_min = 0.0;
  double g_max = 0.0;
  double tau = 0.0;
  std::vector<int> rcl;
};

// RCL = uncolored vertices whose greedy value reaches
// tau = g_min + beta*(g_max - g_min). beta=1 keeps only argmax vertices,
// beta=0 keeps everything.
inline RclState make_rcl(double beta, const std::vector<int>& uncolored,
                         const std::vector<double>& greedy_value) {
  if (uncolored.empty())
    throw std::logic_error("make_rcl: no uncolored vertices");
  RclState s;
  s.g_min = s.g_max = greedy_value[static_cast<std::size_t>(uncolored.front())];
  for (int i : uncolored) {
    const double g = greedy_value[static_cast<std::size_t>(i)];
    s.g_min = std::min(s.g_min, g);
    s.g_max = std::max(s.g_max, g);
  }
  s.tau = s.g_min + beta * (s.g_max - s.g_min);
  for (int i : uncolored)
    if (greedy_value[static_cast<std::size_t>(i)] >= s.tau) s.rcl.push_back(i);
  return s;
}

// Color selection for vertex i against the partial coloring: reuse the lowest
// palette color absent from i's neighborhood, otherwise open a fresh one.
// Covers all four construction scenarios (no colored neighbor with empty or
// non-empty palette, all palette colors blocked, some color free).
inline int get_color(const ConflictGraph& g, int i, const Coloring& partial,
                     int palette_size) {
  std::vector<char> seen(static_cast<std::size_t>(palette_size), 0);
  for (int j : g.adj(i)) {
    const int cj = partial.color[static_cast<std::size_t>(j)];
    if (cj != Coloring::kUncolored) seen[static_cast<std::size_t>(cj)] = 1;
  }
  for (int c = 0; c < palette_size; ++c)
    if (!seen[static_cast<std::size_t>(c)]) return c;
  return palette_size;  // fresh color
}

namespace detail {

// Vertices by non-ascending static degree, ties to the smaller index. This is
// the canonical order for every deterministic tie-break in the GRASP run.
inline std::vector<int> degree_order(const ConflictGraph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.num_vertices()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) > g.degree(b); });
  return order;
}

inline Coloring construct_impl(double beta, const ConflictGraph& g,
                               const std::vector<int>& order, Rng& rng,
                               bool adaptive) {
  const int V = g.num_vertices();
  Coloring c = Coloring::empty(V);
  std::vector<double> greedy(static_cast<std::size_t>(V));
  for (int i = 0; i < V; ++i) greedy[static_cast<std::size_t>(i)] = g.degree(i);
  std::vector<int> uncolored = order;  // kept in canonical order throughout
  int palette = 0;
  for (int step = 0; step < V; ++step) {
    const RclState rcl = make_rcl(beta, uncolored, greedy);
    const int i = rcl.rcl[static_cast<std::size_t>(rng.next_int(static_cast<int>(rcl.rcl.size())))];
    const int col = get_color(g, i, c, palette);
    c.color[static_cast<std::size_t>(i)] = col;
    if (col == palette) ++palette;
    if (adaptive) {
      for (int j : g.adj(i))
        if (c.color[static_cast<std::size_t>(j)] == Coloring::kUncolored)
          greedy[static_cast<std::size_t>(j)] -= 1.0;
    }
    uncolored.erase(std::find(uncolored.begin(), uncolored.end(), i));
  }
  c.num_colors = palette;
  return c;
}

}  // namespace detail

// One greedy randomized adaptive construction pass. Proper, total, and never
// uses more than max_degree+1 colors.
inline Coloring construct_solution(double beta, const ConflictGraph& g, Rng& rng,
                                   bool adaptive = true) {
  return detail::construct_impl(beta, g, detail::degree_order(g), rng, adaptive);
}

// Redundant-color local search: for each color class in ascending color order,
// try to move every member to another palette color absent from its
// neighborhood; the color is dropped only when the whole class moved away.
inline Coloring local_search(const ConflictGraph& g, const Coloring& input) {
  assert(input.total() && input.proper(g));
  Coloring c = input;
  const int k = c.num_colors;
  std::vector<int> usage(static_cast<std::size_t>(k), 0);
  for (int col : c.color) ++usage[static_cast<std::size_t>(col)];
  std::vector<char> neighbor_has(static_cast<std::size_t>(k), 0);
  for (int col = 0; col < k; ++col) {
    if (usage[static_cast<std::size_t>(col)] == 0) continue;
    std::vector<int> members;
    for (int i = 0; i < g.num_vertices(); ++i)
      if (c.color[static_cast<std::size_t>(i)] == col) members.push_back(i);
    bool all_moved = true;
    for (int i : members) {
      std::fill(neighbor_has.begin(), neighbor_has.end(), 0);
      for (int j : g.adj(i)) neighbor_has[static_cast<std::size_t>(c.color[static_cast<std::size_t>(j)])] = 1;
      int target = -1;
      for (int cp = 0; cp < k; ++cp) {
        if (cp == col || usage[static_cast<std::size_t>(cp)] == 0) continue;
        if (!neighbor_has[static_cast<std::size_t>(cp)]) {
          target = cp;
          break;
        }
      }
      if (target >= 0) {
        c.color[static_cast<std::size_t>(i)] = target;
        --usage[static_cast<std::size_t>(col)];
        ++usage[static_cast<std::size_t>(target)];
      } else {
        all_moved = false;
      }
    }
    (void)all_moved;  // the palette drop is exactly usage[col] reaching zero
  }
  c.renumber();
  assert(c.total() && c.proper(g));
  return c;
}

// Full GRASP: max_iterations rounds of construction + local search, keeping
// the solution with the fewest colors (ties to the earliest iteration). Each
// iteration derives its own stream from (seed, iteration), so parallel and
// sequential schedules would return the same result.
inline Coloring grasp(const ConflictGraph& g, const GraspParams& params) {
  if (params.max_iterations < 1)
    throw std::invalid_argument("grasp: max_iterations must be >= 1");
  const std::vector<int> order = detail::degree_order(g);
  Coloring best;
  int best_colors = -1;
  for (int k = 0; k < params.max_iterations; ++k) {
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(k)));
    const double beta = params.fixed_beta ? *params.fixed_beta : rng.next_double();
    Coloring c = detail::construct_impl(beta, g, order, rng, params.adaptive_greedy);
    c = local_search(g, c);
    if (best_colors < 0 || c.num_colors < best_colors) {
      best = std::move(c);
      best_colors = best.num_colors;
    }
  }
  best.renumber();
  return best;
}

}  // namespace cmcast
