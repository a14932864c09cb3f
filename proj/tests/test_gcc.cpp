#include "catch_amalgamated.hpp"

#include "cmcast/gcc.hpp"

using namespace cmcast;

namespace {

struct Instance {
  SystemConfig cfg;
  CachePlacement placement;
  DemandVector demand;
  ConflictGraph graph;
  UserSets K;
};

Instance man_instance() {
  Instance in;
  in.cfg = SystemConfig::homogeneous(2, 2, 2, 1.0);
  in.placement = CachePlacement::from_lists(
      2, 2, 2, {{PacketId{0, 0}, PacketId{1, 0}}, {PacketId{0, 1}, PacketId{1, 1}}});
  in.demand = DemandVector{{0, 1}};
  in.graph = ConflictGraph::build(in.placement, in.demand, in.cfg);
  in.K = UserSets::build(in.graph, in.placement, in.demand);
  return in;
}

Instance random_instance(std::uint64_t seed) {
  Instance in;
  Rng rng(seed);
  const int n = 2 + rng.next_int(3);
  const int m = 2 + rng.next_int(3);
  const int B = 1 + rng.next_int(3);
  in.cfg = SystemConfig::homogeneous(n, m, B, 1.0);
  in.placement = rap_place(in.cfg, uniform_caching_distribution(m), rng);
  for (int u = 0; u < n; ++u) in.demand.file.push_back(rng.next_int(m));
  in.graph = ConflictGraph::build(in.placement, in.demand, in.cfg);
  in.K = UserSets::build(in.graph, in.placement, in.demand);
  return in;
}

}  // namespace

TEST_CASE("gcc1 merges the MAN instance into one color") {
  Instance in = man_instance();
  Rng rng(3);
  const Coloring c = gcc1(in.graph, in.K, rng);
  CHECK(c.num_colors == 1);
  CHECK(c.total());
  CHECK(c.proper(in.graph));
  CHECK(gcc2(in.graph).num_colors == 2);
  Rng rng2(3);
  CHECK(gcc(in.graph, in.K, rng2).num_colors == 1);
}

TEST_CASE("gcc1: empty caches and distinct requests give singleton classes") {
  const int n = 3, B = 2;
  const SystemConfig cfg = SystemConfig::homogeneous(n, 3, B, 0.0);
  const CachePlacement empty(n, 3, B);
  const DemandVector d{{0, 1, 2}};
  const ConflictGraph g = ConflictGraph::build(empty, d, cfg);
  const UserSets K = UserSets::build(g, empty, d);
  Rng rng(4);
  const Coloring c = gcc1(g, K, rng);
  CHECK(c.num_colors == g.num_vertices());
}

TEST_CASE("gcc2 counts distinct requested packets") {
  const int n = 4, B = 3;
  const SystemConfig cfg = SystemConfig::homogeneous(n, 2, B, 0.0);
  const CachePlacement empty(n, 2, B);
  const DemandVector d{{0, 0, 0, 0}};
  const ConflictGraph g = ConflictGraph::build(empty, d, cfg);
  CHECK(gcc2(g).num_colors == B);
  CHECK(gcc2(g).proper(g));
}

TEST_CASE("gcc2 on an empty graph uses zero colors") {
  // every request fully cached by its requester
  const SystemConfig cfg = SystemConfig::homogeneous(1, 1, 2, 1.0);
  const CachePlacement full =
      CachePlacement::from_lists(1, 1, 2, {{PacketId{0, 0}, PacketId{0, 1}}});
  const DemandVector d{{0}};
  const ConflictGraph g = ConflictGraph::build(full, d, cfg);
  CHECK(g.num_vertices() == 0);
  CHECK(gcc2(g).num_colors == 0);
  Rng rng(1);
  const UserSets K = UserSets::build(g, full, d);
  CHECK(gcc(g, K, rng).num_colors == 0);
}

TEST_CASE("gcc single vertex") {
  const SystemConfig cfg = SystemConfig::homogeneous(1, 1, 1, 0.0);
  const CachePlacement empty(1, 1, 1);
  const DemandVector d{{0}};
  const ConflictGraph g = ConflictGraph::build(empty, d, cfg);
  const UserSets K = UserSets::build(g, empty, d);
  Rng rng(1);
  CHECK(gcc1(g, K, rng).num_colors == 1);
}

TEST_CASE("gcc1 determinism under a fixed seed") {
  Instance in = random_instance(909);
  Rng a(55), b(55);
  const Coloring ca = gcc1(in.graph, in.K, a);
  const Coloring cb = gcc1(in.graph, in.K, b);
  CHECK(ca.color == cb.color);
}

TEST_CASE("gcc invariants on random instances") {
  for (int round = 0; round < 40; ++round) {
    Instance in = random_instance(derive_seed(1234, static_cast<std::uint64_t>(round)));
    Rng rng(derive_seed(91, static_cast<std::uint64_t>(round)));
    const Coloring c1 = gcc1(in.graph, in.K, rng);
    CHECK(c1.total());
    CHECK(c1.proper(in.graph));
    // K-homogeneous classes
    for (const auto& members : c1.classes())
      for (int v : members) CHECK(in.K.equal(v, members.front()));
    const Coloring c2 = gcc2(in.graph);
    CHECK(c2.num_colors == in.graph.distinct_packets());
    Rng rng2(derive_seed(92, static_cast<std::uint64_t>(round)));
    Rng rng3(derive_seed(92, static_cast<std::uint64_t>(round)));
    const Coloring best = gcc(in.graph, in.K, rng2);
    const int c1b = gcc1(in.graph, in.K, rng3).num_colors;
    CHECK(best.num_colors == std::min(c1b, c2.num_colors));
    CHECK(best.num_colors <= c2.num_colors);
  }
}
