#include "catch_amalgamated.hpp"

#include "cmcast/oracle.hpp"

using namespace cmcast;

namespace {

ConflictGraph cycle(int k) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < k; ++i) edges.emplace_back(i, (i + 1) % k);
  return ConflictGraph::from_edges(k, edges);
}

ConflictGraph complete(int k) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) edges.emplace_back(i, j);
  return ConflictGraph::from_edges(k, edges);
}

ConflictGraph petersen() {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 5; ++i) {
    edges.emplace_back(i, (i + 1) % 5);          // outer cycle
    edges.emplace_back(5 + i, 5 + (i + 2) % 5);  // inner pentagram
    edges.emplace_back(i, 5 + i);                // spokes
  }
  return ConflictGraph::from_edges(10, edges);
}

void check_witness(const ConflictGraph& g, const OracleResult& r) {
  CHECK(r.witness.total());
  CHECK(r.witness.proper(g));
  std::vector<char> used(static_cast<std::size_t>(r.chi), 0);
  for (int c : r.witness.color) {
    REQUIRE(c >= 0);
    REQUIRE(c < r.chi);
    used[static_cast<std::size_t>(c)] = 1;
  }
  for (char u : used) CHECK(u == 1);
}

}  // namespace

TEST_CASE("chromatic number of named graphs") {
  const ConflictGraph k4 = complete(4);
  const OracleResult rk4 = chromatic_number(k4);
  CHECK(rk4.chi == 4);
  check_witness(k4, rk4);

  const ConflictGraph c6 = cycle(6);
  const OracleResult rc6 = chromatic_number(c6);
  CHECK(rc6.chi == 2);
  check_witness(c6, rc6);

  const ConflictGraph c5 = cycle(5);
  const OracleResult rc5 = chromatic_number(c5);
  CHECK(rc5.chi == 3);
  check_witness(c5, rc5);

  const ConflictGraph pet = petersen();
  const OracleResult rp = chromatic_number(pet);
  CHECK(rp.chi == 3);
  check_witness(pet, rp);
}

TEST_CASE("chromatic number of trivial graphs") {
  CHECK(chromatic_number(ConflictGraph::from_edges(0, {})).chi == 0);
  CHECK(chromatic_number(ConflictGraph::from_edges(5, {})).chi == 1);
}

TEST_CASE("oracle refuses graphs above the cap") {
  CHECK_THROWS(chromatic_number(ConflictGraph::from_edges(21, {})));
}
