#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "cmcast/model.hpp"
#include "cmcast/placement.hpp"

namespace cmcast {

// One vertex per (requested packet, requesting user) pair. Packets already in
// the requester's cache need no transmission and get no vertex.
struct Vertex {
  PacketId packet;
  int user = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// v1 interferes with v2 iff v1's packet is missing from v2's user's cache and
// the two vertices carry different packets.
inline bool interferes(const Vertex& v1, const Vertex& v2, const CachePlacement& C) {
  return v1.packet != v2.packet && !C.has(v2.user, v1.packet);
}

// Index-coding conflict graph: undirected edge wherever interference holds in
// either direction. Immutable once built.
class ConflictGraph {
 public:
  static ConflictGraph build(const CachePlacement& C, const DemandVector& demand,
                             const SystemConfig& cfg) {
    ConflictGraph g;
    const int B = cfg.packets_per_file;
    for (int u = 0; u < cfg.num_users; ++u) {
      const int f = demand.file[static_cast<std::size_t>(u)];
      for (int b = 0; b < B; ++b) {
        const PacketId p{f, b};
        if (!C.has(u, p)) g.vertices_.push_back(Vertex{p, u});
      }
    }
    const int V = static_cast<int>(g.vertices_.size());
    g.adj_.assign(static_cast<std::size_t>(V), {});
    std::size_t edges = 0;
    for (int i = 0; i < V; ++i) {
      for (int j = i + 1; j < V; ++j) {
        const Vertex& a = g.vertices_[static_cast<std::size_t>(i)];
        const Vertex& b = g.vertices_[static_cast<std::size_t>(j)];
        if (interferes(a, b, C) || interferes(b, a, C)) {
          g.adj_[static_cast<std::size_t>(i)].push_back(j);
          g.adj_[static_cast<std::size_t>(j)].push_back(i);
          ++edges;
        }
      }
    }
    g.num_edges_ = edges;
    g.packets_per_file_ = B;
    return g;
  }

  // Builds a bare graph from an explicit edge list (each vertex gets its own
  // synthetic packet identity). Used by oracles and coloring tests that need
  // named topologies.
  static ConflictGraph from_edges(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
    ConflictGraph g;
    g.packets_per_file_ = 1;
    for (int i = 0; i < num_vertices; ++i) g.vertices_.push_back(Vertex{PacketId{i, 0}, i});
    g.adj_.assign(static_cast<std::size_t>(num_vertices), {});
    for (const auto& [a, b] : edges) {
      g.adj_[static_cast<std::size_t>(a)].push_back(b);
      g.adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& list : g.adj_) std::sort(list.begin(), list.end());
    g.num_edges_ = edges.size();
    return g;
  }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  std::size_t num_edges() const { return num_edges_; }
  const Vertex& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& adj(int i) const { return adj_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return static_cast<int>(adj_[static_cast<std::size_t>(i)].size()); }
  int packets_per_file() const { return packets_per_file_; }

  bool has_edge(int i, int j) const {
    const auto& a = adj_[static_cast<std::size_t>(i)];
    return std::binary_search(a.begin(), a.end(), j);
  }

  int max_degree() const {
    int d = 0;
    for (const auto& a : adj_) d = std::max(d, static_cast<int>(a.size()));
    return d;
  }

  // Number of distinct packet identities among the vertices (the GCC2 color
  // count, i.e. the uncoded multicast transmission count).
  int distinct_packets() const {
    std::vector<int> uids;
    uids.reserve(vertices_.size());
    for (const Vertex& v : vertices_) uids.push_back(packet_uid(v.packet, packets_per_file_));
    std::sort(uids.begin(), uids.end());
    return static_cast<int>(std::unique(uids.begin(), uids.end()) - uids.begin());
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<std::vector<int>> adj_;  // sorted neighbor lists
  std::size_t num_edges_ = 0;
  int packets_per_file_ = 1;
};

// Per-vertex K sets: K_v = users caching or requesting packet rho(v). Vertices
// with equal K sets share a class id, so set equality is an integer compare.
class UserSets {
 public:
  static UserSets build(const ConflictGraph& g, const CachePlacement& C,
                        const DemandVector& demand) {
    UserSets ks;
    const int V = g.num_vertices();
    const int n = C.num_users();
    ks.class_of_.resize(static_cast<std::size_t>(V));
    std::unordered_map<int, int> packet_class;  // packet uid -> index into sets_
    std::unordered_map<std::string, int> canon;
    for (int i = 0; i < V; ++i) {
      const Vertex& v = g.vertex(i);
      const int uid = packet_uid(v.packet, g.packets_per_file());
      auto it = packet_class.find(uid);
      int set_idx;
      if (it != packet_class.end()) {
        set_idx = it->second;
      } else {
        std::vector<int> users;
        for (int u = 0; u < n; ++u) {
          if (C.has(u, v.packet) || demand.file[static_cast<std::size_t>(u)] == v.packet.file)
            users.push_back(u);
        }
        // K depends on the packet identity only through (cachers, requesters
        // of the file); requesters of the file all request every packet of it.
        std::string key;
        key.reserve(users.size() * 3);
        for (int u : users) {
          key += static_cast<char>(u & 0xff);
          key += static_cast<char>((u >> 8) & 0xff);
          key += ',';
        }
        auto [cit, inserted] = canon.emplace(key, static_cast<int>(sets_size(ks)));
        if (inserted) ks.sets_.push_back(std::move(users));
        set_idx = cit->second;
        packet_class.emplace(uid, set_idx);
      }
      ks.class_of_[static_cast<std::size_t>(i)] = set_idx;
    }
    return ks;
  }

  int class_of(int vertex) const { return class_of_[static_cast<std::size_t>(vertex)]; }
  const std::vector<int>& users_of(int vertex) const {
    return sets_[static_cast<std::size_t>(class_of(vertex))];
  }
  bool equal(int v1, int v2) const { return class_of(v1) == class_of(v2); }

 private:
  static std::size_t sets_size(const UserSets& ks) { return ks.sets_.size(); }
  std::vector<int> class_of_;
  std::vector<std::vector<int>> sets_;
};

// Standard DIMACS coloring instance; one comment line per vertex mapping the
// DIMACS index back to (user, file, packet index), all 1-based.
inline std::size_t export_dimacs(const ConflictGraph& g, std::ostream& os) {
  std::ostringstream buf;
  for (int i = 0; i < g.num_vertices(); ++i) {
    const Vertex& v = g.vertex(i);
    buf << "c vertex " << (i + 1) << " = " << (v.user + 1) << ':'
        << (v.packet.file + 1) << ':' << (v.packet.index + 1) << '\n';
  }
  buf << "p edge " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (int i = 0; i < g.num_vertices(); ++i)
    for (int j : g.adj(i))
      if (i < j) buf << "e " << (i + 1) << ' ' << (j + 1) << '\n';
  const std::string s = buf.str();
  os << s;
  return s.size();
}

}  // namespace cmcast
