#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmcast/model.hpp"
#include "cmcast/rng.hpp"

namespace cmcast {

// Realized cache contents: for each user, the set of cached packets.
class CachePlacement {
 public:
  CachePlacement() = default;
  CachePlacement(int n, int m, int B)
      : num_users_(n), packets_per_file_(B),
        cached_(static_cast<std::size_t>(n),
                std::vector<char>(static_cast<std::size_t>(m) * B, 0)),
        count_(static_cast<std::size_t>(n), 0) {}

  // Test/fixture constructor from explicit per-user packet lists.
  static CachePlacement from_lists(int n, int m, int B,
                                   const std::vector<std::vector<PacketId>>& lists) {
    CachePlacement c(n, m, B);
    for (int u = 0; u < n; ++u)
      for (const PacketId& p : lists[static_cast<std::size_t>(u)]) c.insert(u, p);
    return c;
  }

  void insert(int user, const PacketId& p) {
    char& slot = cached_[static_cast<std::size_t>(user)]
                        [static_cast<std::size_t>(packet_uid(p, packets_per_file_))];
    if (!slot) {
      slot = 1;
      ++count_[static_cast<std::size_t>(user)];
    }
  }

  bool has(int user, const PacketId& p) const {
    return cached_[static_cast<std::size_t>(user)]
                  [static_cast<std::size_t>(packet_uid(p, packets_per_file_))] != 0;
  }
  bool has_uid(int user, int uid) const {
    return cached_[static_cast<std::size_t>(user)][static_cast<std::size_t>(uid)] != 0;
  }

  int cached_count(int user) const { return count_[static_cast<std::size_t>(user)]; }
  int num_users() const { return num_users_; }
  int packets_per_file() const { return packets_per_file_; }
  int universe_size() const { return static_cast<int>(cached_[0].size()); }

  std::vector<PacketId> packets_of(int user) const {
    std::vector<PacketId> out;
    out.reserve(static_cast<std::size_t>(count_[static_cast<std::size_t>(user)]));
    const auto& row = cached_[static_cast<std::size_t>(user)];
    for (int uid = 0; uid < static_cast<int>(row.size()); ++uid)
      if (row[static_cast<std::size_t>(uid)]) out.push_back(packet_from_uid(uid, packets_per_file_));
    return out;
  }

  // One line per user, space-separated file:index tokens, 1-based, sorted.
  void serialize(std::ostream& os) const {
    for (int u = 0; u < num_users_; ++u) {
      bool first = true;
      for (const PacketId& p : packets_of(u)) {
        if (!first) os << ' ';
        os << (p.file + 1) << ':' << (p.index + 1);
        first = false;
      }
      os << '\n';
    }
  }

 private:
  int num_users_ = 0;
  int packets_per_file_ = 0;
  std::vector<std::vector<char>> cached_;  // [user][packet uid]
  std::vector<int> count_;
};

namespace detail {

// Per-file cached-packet counts for one user: floor p_f*M*B, then hand the
// leftover budget to the files with the largest fractional remainders
// (largest-remainder method), ties to the smaller file index.
inline std::vector<int> per_file_counts(const std::vector<double>& target,
                                        int budget, int B) {
  const int m = static_cast<int>(target.size());
  std::vector<int> count(static_cast<std::size_t>(m));
  std::vector<std::pair<double, int>> rem;
  rem.reserve(static_cast<std::size_t>(m));
  int assigned = 0;
  for (int f = 0; f < m; ++f) {
    double t = target[static_cast<std::size_t>(f)];
    int c = static_cast<int>(std::floor(t + 1e-9));
    c = std::min(c, B);
    count[static_cast<std::size_t>(f)] = c;
    assigned += c;
    rem.emplace_back(t - c, f);
  }
  std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  int leftover = budget - assigned;
  for (const auto& [frac, f] : rem) {
    if (leftover <= 0) break;
    if (count[static_cast<std::size_t>(f)] < B) {
      ++count[static_cast<std::size_t>(f)];
      --leftover;
    }
  }
  if (leftover > 0)
    throw std::runtime_error("placement budget infeasible: leftover packets exceed file capacity");
  return count;
}

}  // namespace detail

// Random popularity-based placement: each user independently caches, for
// every file f, a uniformly random subset of round(p_f*M*B) of its packets.
inline CachePlacement rap_place(const SystemConfig& cfg, const CachingDistribution& P,
                                Rng& rng) {
  const int n = cfg.num_users, m = cfg.num_files, B = cfg.packets_per_file;
  CachePlacement placement(n, m, B);
  std::vector<int> pool(static_cast<std::size_t>(B));
  for (int u = 0; u < n; ++u) {
    const int col = P.p.users() == 1 ? 0 : u;
    const int budget = static_cast<int>(std::floor(cfg.cache_size[static_cast<std::size_t>(u)] * B + 1e-9));
    std::vector<double> target(static_cast<std::size_t>(m));
    for (int f = 0; f < m; ++f)
      target[static_cast<std::size_t>(f)] = P.p(f, col) * cfg.cache_size[static_cast<std::size_t>(u)] * B;
    const std::vector<int> count = detail::per_file_counts(target, budget, B);
    for (int f = 0; f < m; ++f) {
      const int k = count[static_cast<std::size_t>(f)];
      if (k == 0) continue;
      std::iota(pool.begin(), pool.end(), 0);
      // partial Fisher-Yates: first k entries become the sampled subset
      for (int i = 0; i < k; ++i) {
        const int j = i + rng.next_int(B - i);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        placement.insert(u, PacketId{f, pool[static_cast<std::size_t>(i)]});
      }
    }
  }
  return placement;
}

// Steady-state LFU: user u caches all packets of its floor(M_u) most popular
// files, ties broken by smaller file index.
inline CachePlacement lfu_place(const SystemConfig& cfg, const DemandDistribution& Q) {
  const int n = cfg.num_users, m = cfg.num_files, B = cfg.packets_per_file;
  CachePlacement placement(n, m, B);
  std::vector<int> order(static_cast<std::size_t>(m));
  for (int u = 0; u < n; ++u) {
    const int col = Q.q.users() == 1 ? 0 : u;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return Q.q(a, col) > Q.q(b, col);
    });
    const int files_cached =
        std::min(m, static_cast<int>(std::floor(cfg.cache_size[static_cast<std::size_t>(u)] + 1e-9)));
    for (int i = 0; i < files_cached; ++i)
      for (int b = 0; b < B; ++b) placement.insert(u, PacketId{order[static_cast<std::size_t>(i)], b});
  }
  return placement;
}

// The set of files user u caches in full under LFU (helper for rate accounting).
inline std::vector<int> lfu_top_files(const DemandDistribution& Q, int user, int m,
                                      double cache_size) {
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  const int col = Q.q.users() == 1 ? 0 : user;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return Q.q(a, col) > Q.q(b, col);
  });
  order.resize(static_cast<std::size_t>(std::min(m, static_cast<int>(std::floor(cache_size + 1e-9)))));
  return order;
}

}  // namespace cmcast
