#include "catch_amalgamated.hpp"

#include <sstream>

#include "cmcast/conflict_graph.hpp"

using namespace cmcast;

namespace {

// Two users, two files of two packets; user 1 caches {A1, B1}, user 2 caches
// {A2, B2}; user 1 requests A, user 2 requests B. Each missing packet sits in
// the other user's cache.
struct ManInstance {
  SystemConfig cfg = SystemConfig::homogeneous(2, 2, 2, 1.0);
  CachePlacement placement = CachePlacement::from_lists(
      2, 2, 2,
      {{PacketId{0, 0}, PacketId{1, 0}}, {PacketId{0, 1}, PacketId{1, 1}}});
  DemandVector demand{{0, 1}};
};

}  // namespace

TEST_CASE("interferes follows the definition") {
  CachePlacement c = CachePlacement::from_lists(2, 2, 1, {{PacketId{0, 0}}, {}});
  const Vertex v1{PacketId{1, 0}, 0};
  const Vertex same{PacketId{1, 0}, 1};
  CHECK_FALSE(interferes(v1, same, c));  // same packet never interferes
  const Vertex v2{PacketId{0, 0}, 1};
  // packet of v2 (file 1) is cached by user 1
  CHECK_FALSE(interferes(v2, Vertex{PacketId{1, 0}, 0}, c));
  // packet of v1 (file 2) is not cached by user 2
  CHECK(interferes(v1, Vertex{PacketId{0, 0}, 1}, c));
}

TEST_CASE("MAN instance: two vertices, no edges") {
  ManInstance man;
  const ConflictGraph g = ConflictGraph::build(man.placement, man.demand, man.cfg);
  REQUIRE(g.num_vertices() == 2);
  CHECK(g.num_edges() == 0);
  CHECK(g.vertex(0) == Vertex{PacketId{0, 1}, 0});
  CHECK(g.vertex(1) == Vertex{PacketId{1, 0}, 1});

  std::ostringstream os;
  export_dimacs(g, os);
  CHECK(os.str().find("p edge 2 0\n") != std::string::npos);
}

TEST_CASE("empty caches, distinct single-packet files: one edge") {
  const SystemConfig cfg = SystemConfig::homogeneous(2, 2, 1, 0.0);
  const CachePlacement c(2, 2, 1);
  const DemandVector d{{0, 1}};
  const ConflictGraph g = ConflictGraph::build(c, d, cfg);
  REQUIRE(g.num_vertices() == 2);
  CHECK(g.num_edges() == 1);
  CHECK(g.has_edge(0, 1));

  std::ostringstream os;
  const std::size_t bytes = export_dimacs(g, os);
  CHECK(bytes == os.str().size());
  CHECK(os.str().find("p edge 2 1\ne 1 2\n") != std::string::npos);
  CHECK(os.str().find("c vertex 1 = 1:1:1\n") != std::string::npos);
}

TEST_CASE("same file everywhere, empty caches: copies are non-adjacent") {
  const int n = 3, B = 2;
  const SystemConfig cfg = SystemConfig::homogeneous(n, 2, B, 0.0);
  const CachePlacement c(n, 2, B);
  const DemandVector d{{0, 0, 0}};
  const ConflictGraph g = ConflictGraph::build(c, d, cfg);
  REQUIRE(g.num_vertices() == n * B);
  for (int i = 0; i < g.num_vertices(); ++i)
    for (int j = i + 1; j < g.num_vertices(); ++j) {
      const bool same_packet = g.vertex(i).packet == g.vertex(j).packet;
      CHECK(g.has_edge(i, j) == !same_packet);
    }
}

TEST_CASE("vertex count and adjacency symmetry on random instances") {
  for (int round = 0; round < 20; ++round) {
    Rng rng(derive_seed(31, static_cast<std::uint64_t>(round)));
    const int n = 2 + rng.next_int(3);
    const int m = 2 + rng.next_int(3);
    const int B = 1 + rng.next_int(3);
    const SystemConfig cfg = SystemConfig::homogeneous(n, m, B, 1.0);
    const CachingDistribution P = uniform_caching_distribution(m);
    const CachePlacement c = rap_place(cfg, P, rng);
    DemandVector d;
    for (int u = 0; u < n; ++u) d.file.push_back(rng.next_int(m));
    const ConflictGraph g = ConflictGraph::build(c, d, cfg);

    int expected = 0;
    for (int u = 0; u < n; ++u)
      for (int b = 0; b < B; ++b)
        if (!c.has(u, PacketId{d.file[static_cast<std::size_t>(u)], b})) ++expected;
    CHECK(g.num_vertices() == expected);

    for (int i = 0; i < g.num_vertices(); ++i)
      for (int j : g.adj(i)) {
        CHECK(i != j);
        CHECK(g.has_edge(j, i));
      }
  }
}

TEST_CASE("growing a cache never adds edges") {
  for (int round = 0; round < 10; ++round) {
    Rng rng(derive_seed(77, static_cast<std::uint64_t>(round)));
    const int n = 3, m = 3, B = 2;
    const SystemConfig cfg = SystemConfig::homogeneous(n, m, B, 1.0);
    const CachingDistribution P = uniform_caching_distribution(m);
    CachePlacement c = rap_place(cfg, P, rng);
    DemandVector d;
    for (int u = 0; u < n; ++u) d.file.push_back(rng.next_int(m));
    const std::size_t before = ConflictGraph::build(c, d, cfg).num_edges();
    // add one random missing packet to a random user's cache
    const int u = rng.next_int(n);
    const PacketId p{rng.next_int(m), rng.next_int(B)};
    c.insert(u, p);
    const std::size_t after = ConflictGraph::build(c, d, cfg).num_edges();
    CHECK(after <= before);
  }
}

TEST_CASE("user sets: MAN packets are shared by both users") {
  ManInstance man;
  const ConflictGraph g = ConflictGraph::build(man.placement, man.demand, man.cfg);
  const UserSets K = UserSets::build(g, man.placement, man.demand);
  CHECK(K.users_of(0) == std::vector<int>{0, 1});
  CHECK(K.users_of(1) == std::vector<int>{0, 1});
  CHECK(K.equal(0, 1));
}
