#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmcast/coloring.hpp"
#include "cmcast/conflict_graph.hpp"
#include "cmcast/placement.hpp"
#include "cmcast/rng.hpp"

namespace cmcast {

using Payload = std::vector<std::uint8_t>;

constexpr std::size_t kDefaultPayloadLength = 64;

struct Codeword {
  int color = 0;
  std::vector<PacketId> members;  // distinct packets, sorted
  Payload bytes;                  // XOR over members
};

// PayloadStore: one payload per packet in the m*B universe, all equal length.
inline std::vector<Payload> random_payloads(int universe, std::size_t length, Rng& rng) {
  std::vector<Payload> store(static_cast<std::size_t>(universe), Payload(length));
  for (auto& p : store)
    for (auto& b : p) b = static_cast<std::uint8_t>(rng.next_u64() & 0xff);
  return store;
}

// One XOR codeword per color class. Duplicate packet identities within a
// class (the same packet requested by several users) contribute once.
inline std::vector<Codeword> encode(const Coloring& coloring, const ConflictGraph& g,
                                    const std::vector<Payload>& payloads) {
  const int B = g.packets_per_file();
  std::vector<Codeword> out(static_cast<std::size_t>(coloring.num_colors));
  for (int c = 0; c < coloring.num_colors; ++c) out[static_cast<std::size_t>(c)].color = c;
  for (int i = 0; i < g.num_vertices(); ++i) {
    const int c = coloring.color[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(c)].members.push_back(g.vertex(i).packet);
  }
  std::size_t length = 0;
  for (const auto& p : payloads) {
    if (length == 0) length = p.size();
    if (p.size() != length) throw std::invalid_argument("encode: payload length mismatch");
  }
  for (Codeword& cw : out) {
    std::sort(cw.members.begin(), cw.members.end());
    cw.members.erase(std::unique(cw.members.begin(), cw.members.end()), cw.members.end());
    cw.bytes.assign(length, 0);
    for (const PacketId& p : cw.members) {
      const Payload& src = payloads[static_cast<std::size_t>(packet_uid(p, B))];
      for (std::size_t k = 0; k < length; ++k) cw.bytes[k] ^= src[k];
    }
  }
  return out;
}

// Recover user u's requested packets. A packet may appear in several codewords
// (its copies at different users can receive different colors); the user
// decodes from one whose remaining members it holds in cache. Properness of
// the source coloring guarantees such a codeword exists for the user's own
// vertex.
inline std::map<PacketId, Payload> decode(const std::vector<Codeword>& codewords,
                                          int user, const CachePlacement& C,
                                          const std::vector<Payload>& cache_payloads,
                                          const std::vector<PacketId>& requests) {
  const int B = C.packets_per_file();
  std::map<PacketId, Payload> out;
  for (const PacketId& want : requests) {
    const Codeword* found = nullptr;
    bool carried = false;
    int breach_color = -1;
    for (const Codeword& cw : codewords) {
      if (!std::binary_search(cw.members.begin(), cw.members.end(), want)) continue;
      carried = true;
      const bool cancelable =
          std::all_of(cw.members.begin(), cw.members.end(), [&](const PacketId& member) {
            return member == want || C.has(user, member);
          });
      if (cancelable) {
        found = &cw;
        break;
      }
      if (breach_color < 0) breach_color = cw.color;
    }
    if (!carried)
      throw std::runtime_error("decode: no codeword carries the requested packet");
    if (!found)
      throw std::runtime_error(
          "decode: invalid coloring, color " + std::to_string(breach_color + 1) +
          " mixes a packet missing from user " + std::to_string(user + 1) + "'s cache");
    Payload acc = found->bytes;
    for (const PacketId& member : found->members) {
      if (member == want) continue;
      const Payload& src = cache_payloads[static_cast<std::size_t>(packet_uid(member, B))];
      for (std::size_t k = 0; k < acc.size(); ++k) acc[k] ^= src[k];
    }
    out.emplace(want, std::move(acc));
  }
  return out;
}

// End-to-end check: random payloads, encode, decode for every user, compare
// with ground truth. Returns nullopt on success, else the first mismatch.
inline std::optional<std::string> verify_round_trip(const CachePlacement& C,
                                                    const DemandVector& demand,
                                                    const ConflictGraph& g,
                                                    const Coloring& coloring, Rng& rng,
                                                    std::size_t payload_length = kDefaultPayloadLength) {
  const int B = C.packets_per_file();
  const std::vector<Payload> truth = random_payloads(C.universe_size(), payload_length, rng);
  std::vector<Codeword> codewords;
  try {
    codewords = encode(coloring, g, truth);
  } catch (const std::exception& e) {
    return std::string("encode failed: ") + e.what();
  }
  for (int u = 0; u < C.num_users(); ++u) {
    std::vector<PacketId> requests;
    const int f = demand.file[static_cast<std::size_t>(u)];
    for (int b = 0; b < B; ++b) {
      const PacketId p{f, b};
      if (!C.has(u, p)) requests.push_back(p);
    }
    std::map<PacketId, Payload> got;
    try {
      got = decode(codewords, u, C, truth, requests);
    } catch (const std::exception& e) {
      return "user " + std::to_string(u + 1) + ": " + e.what();
    }
    for (const PacketId& p : requests) {
      if (got.at(p) != truth[static_cast<std::size_t>(packet_uid(p, B))]) {
        return "mismatch at user " + std::to_string(u + 1) + " packet " +
               std::to_string(p.file + 1) + ":" + std::to_string(p.index + 1);
      }
    }
  }
  return std::nullopt;
}

// Per codeword: "color k: file:index,file:index,..." then a hex payload line.
inline void serialize_codewords(const std::vector<Codeword>& codewords, std::ostream& os) {
  static const char* hex = "0123456789abcdef";
  for (const Codeword& cw : codewords) {
    os << "color " << (cw.color + 1) << ":";
    bool first = true;
    for (const PacketId& p : cw.members) {
      os << (first ? " " : ",") << (p.file + 1) << ':' << (p.index + 1);
      first = false;
    }
    os << '\n';
    for (std::uint8_t b : cw.bytes) os << hex[b >> 4] << hex[b & 0xf];
    os << '\n';
  }
}

}  // namespace cmcast
