#pragma once

#include <algorithm>
#include <ostream>
#include <vector>

#include "cmcast/conflict_graph.hpp"

namespace cmcast {

// A (partial, during construction) vertex coloring. Colors are 0-based ints;
// kUncolored marks unassigned vertices.
struct Coloring {
  static constexpr int kUncolored = -1;

  std::vector<int> color;
  int num_colors = 0;

  static Coloring empty(int num_vertices) {
    Coloring c;
    c.color.assign(static_cast<std::size_t>(num_vertices), kUncolored);
    return c;
  }

  bool total() const {
    return std::none_of(color.begin(), color.end(),
                        [](int c) { return c == Coloring::kUncolored; });
  }

  bool proper(const ConflictGraph& g) const {
    for (int i = 0; i < g.num_vertices(); ++i) {
      const int ci = color[static_cast<std::size_t>(i)];
      if (ci == kUncolored) continue;
      for (int j : g.adj(i))
        if (j > i && color[static_cast<std::size_t>(j)] == ci) return false;
    }
    return true;
  }

  // Renumber colors densely 0..k-1 in order of first appearance.
  void renumber() {
    std::vector<int> map;
    int next = 0;
    for (int& c : color) {
      if (c == kUncolored) continue;
      if (c >= static_cast<int>(map.size())) map.resize(static_cast<std::size_t>(c) + 1, kUncolored);
      if (map[static_cast<std::size_t>(c)] == kUncolored) map[static_cast<std::size_t>(c)] = next++;
      c = map[static_cast<std::size_t>(c)];
    }
    num_colors = next;
  }

  std::vector<std::vector<int>> classes() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(num_colors));
    for (int i = 0; i < static_cast<int>(color.size()); ++i)
      if (color[static_cast<std::size_t>(i)] != kUncolored)
        out[static_cast<std::size_t>(color[static_cast<std::size_t>(i)])].push_back(i);
    return out;
  }

  // One line per vertex: "vertex_index color_id", both 1-based.
  void serialize(std::ostream& os) const {
    for (int i = 0; i < static_cast<int>(color.size()); ++i)
      os << (i + 1) << ' ' << (color[static_cast<std::size_t>(i)] + 1) << '\n';
  }
};

}  // namespace cmcast
