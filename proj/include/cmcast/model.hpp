#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmcast/rng.hpp"

namespace cmcast {

// Files, users and packets are 0-based internally; all serialized output is
// 1-based.

constexpr double kRowSumTolerance = 1e-12;

struct SystemConfig {
  int num_users = 0;               // n
  int num_files = 0;               // m
  int packets_per_file = 0;        // B
  std::vector<double> cache_size;  // M_u, in files, length n

  static SystemConfig homogeneous(int n, int m, int B, double M) {
    SystemConfig cfg;
    cfg.num_users = n;
    cfg.num_files = m;
    cfg.packets_per_file = B;
    cfg.cache_size.assign(static_cast<std::size_t>(n), M);
    return cfg;
  }

  int num_packets() const { return num_files * packets_per_file; }
};

// Column-stochastic matrix over (file, user): each user's column sums to 1.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;
  ProbabilityMatrix(int files, int users, double fill = 0.0)
      : files_(files), users_(users),
        data_(static_cast<std::size_t>(files) * users, fill) {}

  double operator()(int file, int user) const {
    return data_[static_cast<std::size_t>(file) * users_ + user];
  }
  double& operator()(int file, int user) {
    return data_[static_cast<std::size_t>(file) * users_ + user];
  }

  int files() const { return files_; }
  int users() const { return users_; }

  // True when every user has the same column.
  bool homogeneous() const {
    for (int f = 0; f < files_; ++f)
      for (int u = 1; u < users_; ++u)
        if ((*this)(f, u) != (*this)(f, 0)) return false;
    return true;
  }

  std::vector<double> column(int user) const {
    std::vector<double> col(static_cast<std::size_t>(files_));
    for (int f = 0; f < files_; ++f) col[f] = (*this)(f, user);
    return col;
  }

 private:
  int files_ = 0;
  int users_ = 0;
  std::vector<double> data_;
};

struct DemandDistribution {
  ProbabilityMatrix q;  // q[f,u] = probability user u requests file f
};

struct CachingDistribution {
  ProbabilityMatrix p;  // p[f,u] governs random placement
};

struct DemandVector {
  std::vector<int> file;  // file[u] = file requested by user u

  int num_users() const { return static_cast<int>(file.size()); }
};

struct PacketId {
  int file = 0;
  int index = 0;  // packet index within the file, 0..B-1

  friend bool operator==(const PacketId&, const PacketId&) = default;
  friend auto operator<=>(const PacketId&, const PacketId&) = default;
};

// Flat identifier in the m*B packet universe.
inline int packet_uid(const PacketId& p, int packets_per_file) {
  return p.file * packets_per_file + p.index;
}
inline PacketId packet_from_uid(int uid, int packets_per_file) {
  return PacketId{uid / packets_per_file, uid % packets_per_file};
}

struct RateSample {
  int colors = 0;
  double rate = 0.0;  // colors / B, in file-size transmission units
  std::string scheme;

  static RateSample make(int colors, int packets_per_file, std::string scheme) {
    RateSample s;
    s.colors = colors;
    s.rate = static_cast<double>(colors) / packets_per_file;
    s.scheme = std::move(scheme);
    return s;
  }
};

// Zipf popularity with exponent alpha, identical for every user:
// q_f = f^-alpha / sum_j j^-alpha (1-based file rank).
inline DemandDistribution zipf_distribution(int m, double alpha, int n = 1) {
  if (m < 1) throw std::invalid_argument("zipf_distribution: m must be >= 1");
  if (alpha < 0) throw std::invalid_argument("zipf_distribution: alpha must be >= 0");
  std::vector<double> w(static_cast<std::size_t>(m));
  double norm = 0.0;
  for (int f = 0; f < m; ++f) {
    w[f] = std::pow(static_cast<double>(f + 1), -alpha);
    norm += w[f];
  }
  DemandDistribution d;
  d.q = ProbabilityMatrix(m, n);
  for (int f = 0; f < m; ++f)
    for (int u = 0; u < n; ++u) d.q(f, u) = w[f] / norm;
  return d;
}

namespace detail {
// Inverse-CDF draw from one user's column.
inline int sample_column(const ProbabilityMatrix& q, int user, Rng& rng) {
  const double x = rng.next_double();
  double acc = 0.0;
  const int m = q.files();
  for (int f = 0; f < m; ++f) {
    acc += q(f, user);
    if (x < acc) return f;
  }
  return m - 1;  // guards against accumulated rounding at x ~ 1
}
}  // namespace detail

inline DemandVector sample_demand(const DemandDistribution& Q, int n, Rng& rng) {
  DemandVector d;
  d.file.resize(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    const int col = Q.q.users() == 1 ? 0 : u;
    d.file[u] = detail::sample_column(Q.q, col, rng);
  }
  return d;
}

// Checks the model constraints; returns a diagnostic naming the first
// violated constraint, or nullopt when everything is consistent.
inline std::optional<std::string> validate(const SystemConfig& cfg,
                                           const DemandDistribution& Q,
                                           const CachingDistribution& P) {
  std::ostringstream err;
  if (cfg.num_users < 1 || cfg.num_files < 1 || cfg.packets_per_file < 1)
    return "n, m and B must all be >= 1";
  if (static_cast<int>(cfg.cache_size.size()) != cfg.num_users)
    return "cache_size length does not match user count";
  for (int u = 0; u < cfg.num_users; ++u) {
    if (cfg.cache_size[u] < 0 || cfg.cache_size[u] > cfg.num_files) {
      err << "cache size out of [0, m] for user " << (u + 1);
      return err.str();
    }
  }
  auto check_matrix = [&](const ProbabilityMatrix& mat,
                          const char* name) -> std::optional<std::string> {
    if (mat.files() != cfg.num_files ||
        (mat.users() != cfg.num_users && mat.users() != 1)) {
      err << name << " dimensions do not match (n, m)";
      return err.str();
    }
    for (int u = 0; u < mat.users(); ++u) {
      double sum = 0.0;
      for (int f = 0; f < mat.files(); ++f) {
        const double v = mat(f, u);
        if (v < 0.0 || v > 1.0) {
          err << name << " entry out of [0,1] at (" << (f + 1) << "," << (u + 1) << ")";
          return err.str();
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        err << name << " column for user " << (u + 1) << " sums to " << sum;
        return err.str();
      }
    }
    return std::nullopt;
  };
  if (auto e = check_matrix(Q.q, "Q")) return e;
  if (auto e = check_matrix(P.p, "P")) return e;
  for (int u = 0; u < cfg.num_users; ++u) {
    const int col = P.p.users() == 1 ? 0 : u;
    for (int f = 0; f < cfg.num_files; ++f) {
      const double mp = cfg.cache_size[u] * P.p(f, col);
      if (mp < 0.0 || mp > 1.0 + 1e-12) {
        err << "M*p exceeds 1 at (" << (f + 1) << "," << (u + 1) << ")";
        return err.str();
      }
    }
  }
  return std::nullopt;
}

inline CachingDistribution uniform_caching_distribution(int m, int n = 1) {
  CachingDistribution c;
  c.p = ProbabilityMatrix(m, n, 1.0 / m);
  return c;
}

}  // namespace cmcast
