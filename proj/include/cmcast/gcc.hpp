#pragma once

#include <unordered_map>
#include <vector>

#include "cmcast/coloring.hpp"
#include "cmcast/conflict_graph.hpp"
#include "cmcast/rng.hpp"

namespace cmcast {

// GCC1: repeatedly grow an independent set from a pivot, admitting a vertex
// only if it has no edge to the set and its K set equals the set members' K;
// each grown set becomes one color class.
inline Coloring gcc1(const ConflictGraph& g, const UserSets& K, Rng& rng,
                     bool deterministic_pivot = false) {
  const int V = g.num_vertices();
  Coloring c = Coloring::empty(V);
  std::vector<int> remaining(static_cast<std::size_t>(V));
  for (int i = 0; i < V; ++i) remaining[static_cast<std::size_t>(i)] = i;
  std::vector<char> blocked(static_cast<std::size_t>(V), 0);  // adjacent to current I
  int next_color = 0;
  while (!remaining.empty()) {
    const std::size_t pick =
        deterministic_pivot ? 0 : static_cast<std::size_t>(rng.next_int(static_cast<int>(remaining.size())));
    const int pivot = remaining[pick];
    const int kclass = K.class_of(pivot);
    std::vector<char> in_set(static_cast<std::size_t>(V), 0);
    in_set[static_cast<std::size_t>(pivot)] = 1;
    for (int j : g.adj(pivot)) blocked[static_cast<std::size_t>(j)] = 1;
    // inner scan in ascending vertex index over the remaining vertices
    for (int v : remaining) {
      if (v == pivot || blocked[static_cast<std::size_t>(v)] || K.class_of(v) != kclass) continue;
      in_set[static_cast<std::size_t>(v)] = 1;
      for (int j : g.adj(v)) blocked[static_cast<std::size_t>(j)] = 1;
    }
    std::vector<int> kept;
    kept.reserve(remaining.size());
    for (int v : remaining) {
      if (in_set[static_cast<std::size_t>(v)]) {
        c.color[static_cast<std::size_t>(v)] = next_color;
      } else {
        kept.push_back(v);
        blocked[static_cast<std::size_t>(v)] = 0;
      }
    }
    remaining.swap(kept);
    ++next_color;
  }
  c.num_colors = next_color;
  return c;
}

// GCC2: color classes are exactly the groups of vertices sharing a packet
// identity — uncoded multicast of every distinct requested-missing packet.
inline Coloring gcc2(const ConflictGraph& g) {
  const int V = g.num_vertices();
  Coloring c = Coloring::empty(V);
  std::unordered_map<int, int> color_of_packet;
  int next_color = 0;
  for (int i = 0; i < V; ++i) {
    const int uid = packet_uid(g.vertex(i).packet, g.packets_per_file());
    auto [it, inserted] = color_of_packet.emplace(uid, next_color);
    if (inserted) ++next_color;
    c.color[static_cast<std::size_t>(i)] = it->second;
  }
  c.num_colors = next_color;
  return c;
}

// GCC: the better of GCC1 and GCC2, ties to GCC1.
inline Coloring gcc(const ConflictGraph& g, const UserSets& K, Rng& rng,
                    bool deterministic_pivot = false) {
  Coloring c1 = gcc1(g, K, rng, deterministic_pivot);
  Coloring c2 = gcc2(g);
  return c1.num_colors <= c2.num_colors ? c1 : c2;
}

}  // namespace cmcast
