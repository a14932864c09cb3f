#include "catch_amalgamated.hpp"

#include <sstream>

#include "cmcast/delivery.hpp"
#include "cmcast/gcc.hpp"
#include "cmcast/grasp.hpp"

using namespace cmcast;

namespace {

struct Instance {
  SystemConfig cfg;
  CachePlacement placement;
  DemandVector demand;
  ConflictGraph graph;
};

Instance man_instance() {
  Instance in;
  in.cfg = SystemConfig::homogeneous(2, 2, 2, 1.0);
  in.placement = CachePlacement::from_lists(
      2, 2, 2, {{PacketId{0, 0}, PacketId{1, 0}}, {PacketId{0, 1}, PacketId{1, 1}}});
  in.demand = DemandVector{{0, 1}};
  in.graph = ConflictGraph::build(in.placement, in.demand, in.cfg);
  return in;
}

Instance random_instance(std::uint64_t seed, int n, int B, int m, double M) {
  Instance in;
  Rng rng(seed);
  in.cfg = SystemConfig::homogeneous(n, m, B, M);
  in.placement = rap_place(in.cfg, uniform_caching_distribution(m), rng);
  for (int u = 0; u < n; ++u) in.demand.file.push_back(rng.next_int(m));
  in.graph = ConflictGraph::build(in.placement, in.demand, in.cfg);
  return in;
}

}  // namespace

TEST_CASE("encode XORs the class members") {
  Instance in = man_instance();
  const UserSets K = UserSets::build(in.graph, in.placement, in.demand);
  Rng rng(2);
  const Coloring c = gcc1(in.graph, K, rng);
  REQUIRE(c.num_colors == 1);

  std::vector<Payload> payloads(static_cast<std::size_t>(in.placement.universe_size()), Payload(1, 0));
  payloads[static_cast<std::size_t>(packet_uid(PacketId{0, 1}, 2))] = {0xAA};
  payloads[static_cast<std::size_t>(packet_uid(PacketId{1, 0}, 2))] = {0x55};
  const std::vector<Codeword> cws = encode(c, in.graph, payloads);
  REQUIRE(cws.size() == 1);
  CHECK(cws[0].members.size() == 2);
  CHECK(cws[0].bytes == Payload{0xFF});

  // both users decode their missing packet from the single codeword
  const auto got0 = decode(cws, 0, in.placement, payloads, {PacketId{0, 1}});
  CHECK(got0.at(PacketId{0, 1}) == Payload{0xAA});
  const auto got1 = decode(cws, 1, in.placement, payloads, {PacketId{1, 0}});
  CHECK(got1.at(PacketId{1, 0}) == Payload{0x55});
}

TEST_CASE("singleton codeword carries the packet verbatim") {
  const SystemConfig cfg = SystemConfig::homogeneous(1, 1, 1, 0.0);
  const CachePlacement empty(1, 1, 1);
  const DemandVector d{{0}};
  const ConflictGraph g = ConflictGraph::build(empty, d, cfg);
  Coloring c = Coloring::empty(1);
  c.color = {0};
  c.num_colors = 1;
  const std::vector<Payload> payloads{{0x12, 0x34}};
  const auto cws = encode(c, g, payloads);
  REQUIRE(cws.size() == 1);
  CHECK(cws[0].bytes == Payload{0x12, 0x34});
  const auto got = decode(cws, 0, empty, payloads, {PacketId{0, 0}});
  CHECK(got.at(PacketId{0, 0}) == payloads[0]);
}

TEST_CASE("duplicate packet identities collapse to one member") {
  // three users request the same single-packet file, empty caches
  const SystemConfig cfg = SystemConfig::homogeneous(3, 1, 1, 0.0);
  const CachePlacement empty(3, 1, 1);
  const DemandVector d{{0, 0, 0}};
  const ConflictGraph g = ConflictGraph::build(empty, d, cfg);
  const Coloring c = gcc2(g);
  REQUIRE(c.num_colors == 1);
  const std::vector<Payload> payloads{{0x5A}};
  const auto cws = encode(c, g, payloads);
  REQUIRE(cws.size() == 1);
  CHECK(cws[0].members.size() == 1);
  CHECK(cws[0].bytes == Payload{0x5A});
}

TEST_CASE("payload length mismatch is rejected") {
  Instance in = man_instance();
  const Coloring c = gcc2(in.graph);
  std::vector<Payload> payloads(static_cast<std::size_t>(in.placement.universe_size()), Payload(4, 0));
  payloads[1] = Payload(3, 0);
  CHECK_THROWS(encode(c, in.graph, payloads));
}

TEST_CASE("round trip succeeds for gcc and grasp colorings") {
  for (int round = 0; round < 15; ++round) {
    Instance in = random_instance(derive_seed(8, static_cast<std::uint64_t>(round)), 4, 3, 3, 1.0);
    const UserSets K = UserSets::build(in.graph, in.placement, in.demand);
    Rng crng(round);
    const Coloring cg = gcc(in.graph, K, crng);
    Rng prng(derive_seed(9, static_cast<std::uint64_t>(round)));
    CHECK_FALSE(verify_round_trip(in.placement, in.demand, in.graph, cg, prng, 16).has_value());

    GraspParams params;
    params.max_iterations = 5;
    params.seed = round;
    const Coloring gr = grasp(in.graph, params);
    Rng prng2(derive_seed(10, static_cast<std::uint64_t>(round)));
    CHECK_FALSE(verify_round_trip(in.placement, in.demand, in.graph, gr, prng2, 16).has_value());
  }
}

TEST_CASE("corrupted coloring is detected and names the breach") {
  // two users, empty caches, distinct single-packet files: one edge; merging
  // its endpoints' colors makes the codeword undecodable for both users
  const SystemConfig cfg = SystemConfig::homogeneous(2, 2, 1, 0.0);
  const CachePlacement empty(2, 2, 1);
  const DemandVector d{{0, 1}};
  const ConflictGraph g = ConflictGraph::build(empty, d, cfg);
  REQUIRE(g.num_edges() == 1);
  Coloring c = Coloring::empty(2);
  c.color = {0, 0};
  c.num_colors = 1;
  REQUIRE_FALSE(c.proper(g));
  Rng prng(4);
  const auto failure = verify_round_trip(empty, d, g, c, prng, 8);
  REQUIRE(failure.has_value());
  CHECK(failure->find("user 1") != std::string::npos);
  CHECK(failure->find("color 1") != std::string::npos);
}

TEST_CASE("empty demand graph yields zero codewords") {
  const SystemConfig cfg = SystemConfig::homogeneous(1, 1, 2, 1.0);
  const CachePlacement full =
      CachePlacement::from_lists(1, 1, 2, {{PacketId{0, 0}, PacketId{0, 1}}});
  const DemandVector d{{0}};
  const ConflictGraph g = ConflictGraph::build(full, d, cfg);
  const Coloring c = gcc2(g);
  std::vector<Payload> payloads(2, Payload(4, 1));
  CHECK(encode(c, g, payloads).empty());
  Rng rng(1);
  CHECK_FALSE(verify_round_trip(full, d, g, c, rng).has_value());
}

TEST_CASE("codeword serialization format") {
  Instance in = man_instance();
  const UserSets K = UserSets::build(in.graph, in.placement, in.demand);
  Rng rng(2);
  const Coloring c = gcc1(in.graph, K, rng);
  std::vector<Payload> payloads(static_cast<std::size_t>(in.placement.universe_size()), Payload(2, 0));
  payloads[static_cast<std::size_t>(packet_uid(PacketId{0, 1}, 2))] = {0xAB, 0x01};
  const auto cws = encode(c, in.graph, payloads);
  std::ostringstream os;
  serialize_codewords(cws, os);
  CHECK(os.str() == "color 1: 1:2,2:1\nab01\n");
}
