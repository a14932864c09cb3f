#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cmcast/model.hpp"
#include "cmcast/rng.hpp"

namespace cmcast {

struct BoundResult {
  double psi = 0.0;
  double m_bar = 0.0;
  double r_ub = 0.0;
};

// The quadruple sum aggregates per-user terms within each subset. The literal
// form sums them; the alternate form takes the maximum, which in the
// homogeneous uniform case recovers the ((1-MC/m)/(M/m))(1-(1-M/m)^n) shape
// with its multiplicative caching gain. Both are available; callers choose.
enum class PsiAggregation { kLiteral, kPerSubsetMax };

enum class RhoMethod { kExact, kMonteCarlo };

struct PsiOptions {
  PsiAggregation aggregation = PsiAggregation::kLiteral;
  RhoMethod rho = RhoMethod::kExact;
  long mc_samples = 100000;
  std::uint64_t seed = 0x9d2c5680;
  bool force_direct = false;  // skip the homogeneous fast path (self-consistency tests)
};

constexpr int kDirectUserCap = 12;
constexpr long kExactTupleCap = 1000000;

// Expected number of distinct requested files.
inline double m_bar(const DemandDistribution& Q, int n) {
  double total = 0.0;
  for (int f = 0; f < Q.q.files(); ++f) {
    double none = 1.0;
    for (int u = 0; u < n; ++u) none *= 1.0 - Q.q(f, Q.q.users() == 1 ? 0 : u);
    total += 1.0 - none;
  }
  return total;
}

namespace detail {

inline double pm(const CachingDistribution& P, const SystemConfig& cfg, int f, int u) {
  const int col = P.p.users() == 1 ? 0 : u;
  return P.p(f, col) * cfg.cache_size[static_cast<std::size_t>(u)];
}

inline double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

}  // namespace detail

// lambda(u, f) for a user subset: the probability-shaped product
// (1 - p_f,u M_u) * prod_{k in subset\{u}} p_f,k M_k * prod_{k outside} (1 - p_f,k M_k).
inline double lambda_term(int u, int f, const std::vector<int>& subset,
                          const CachingDistribution& P, const SystemConfig& cfg) {
  double value = 1.0 - detail::pm(P, cfg, f, u);
  std::vector<char> in(static_cast<std::size_t>(cfg.num_users), 0);
  for (int k : subset) in[static_cast<std::size_t>(k)] = 1;
  for (int k = 0; k < cfg.num_users; ++k) {
    if (k == u) continue;
    const double x = detail::pm(P, cfg, f, k);
    value *= in[static_cast<std::size_t>(k)] ? x : 1.0 - x;
  }
  return value;
}

namespace detail {

// rho table for one subset: rho[f * ell + ui] where ui indexes into `subset`.
// Exact mode enumerates all m^ell demand tuples of the subset's users; Monte
// Carlo draws `samples` tuples. Tie mass is split equally over the argmax set.
inline std::vector<double> rho_table(const std::vector<int>& subset,
                                     const CachingDistribution& P,
                                     const DemandDistribution& Q,
                                     const SystemConfig& cfg, RhoMethod method,
                                     long samples, Rng* rng) {
  const int ell = static_cast<int>(subset.size());
  const int m = cfg.num_files;
  std::vector<double> rho(static_cast<std::size_t>(m) * ell, 0.0);

  // lambda depends on (u, f) only, for a fixed subset
  std::vector<double> lam(static_cast<std::size_t>(m) * ell);
  for (int ui = 0; ui < ell; ++ui)
    for (int f = 0; f < m; ++f)
      lam[static_cast<std::size_t>(f) * ell + ui] = lambda_term(subset[static_cast<std::size_t>(ui)], f, subset, P, cfg);

  std::vector<int> tuple(static_cast<std::size_t>(ell), 0);
  std::vector<int> requested;  // distinct files of the tuple
  auto accumulate = [&](double weight) {
    requested.assign(tuple.begin(), tuple.end());
    std::sort(requested.begin(), requested.end());
    requested.erase(std::unique(requested.begin(), requested.end()), requested.end());
    for (int ui = 0; ui < ell; ++ui) {
      double best = -1.0;
      int ties = 0;
      for (int g : requested) {
        const double v = lam[static_cast<std::size_t>(g) * ell + ui];
        if (v > best) {
          best = v;
          ties = 1;
        } else if (v == best) {
          ++ties;
        }
      }
      const double share = weight / ties;
      for (int g : requested)
        if (lam[static_cast<std::size_t>(g) * ell + ui] == best)
          rho[static_cast<std::size_t>(g) * ell + ui] += share;
    }
  };

  if (method == RhoMethod::kExact) {
    double cap = 1.0;
    for (int i = 0; i < ell; ++i) {
      cap *= m;
      if (cap > static_cast<double>(kExactTupleCap))
        throw std::invalid_argument("rho: exact enumeration exceeds the m^l cap; use Monte Carlo");
    }
    // odometer over all m^ell tuples
    for (;;) {
      double w = 1.0;
      for (int i = 0; i < ell; ++i) {
        const int u = subset[static_cast<std::size_t>(i)];
        w *= Q.q(tuple[static_cast<std::size_t>(i)], Q.q.users() == 1 ? 0 : u);
      }
      if (w > 0.0) accumulate(w);
      int pos = ell - 1;
      while (pos >= 0 && ++tuple[static_cast<std::size_t>(pos)] == m) {
        tuple[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  } else {
    const double w = 1.0 / static_cast<double>(samples);
    for (long s = 0; s < samples; ++s) {
      for (int i = 0; i < ell; ++i) {
        const int u = subset[static_cast<std::size_t>(i)];
        tuple[static_cast<std::size_t>(i)] = sample_column(Q.q, Q.q.users() == 1 ? 0 : u, *rng);
      }
      accumulate(w);
    }
  }
  return rho;
}

inline bool is_homogeneous(const CachingDistribution& P, const DemandDistribution& Q,
                           const SystemConfig& cfg) {
  if (!P.p.homogeneous() || !Q.q.homogeneous()) return false;
  for (double M : cfg.cache_size)
    if (M != cfg.cache_size[0]) return false;
  return true;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Homogeneous evaluation: every size-l subset contributes identically, and
// within a subset each user contributes the same amount. For a fixed l,
// lambda_l(f) = (p_f M)^(l-1) (1 - p_f M)^(n-l+1), and the rho-weighted sum
// collapses to sum over lambda-groups of lambda_g * P(top requested group = g).
inline double psi_homogeneous(const CachingDistribution& P, const DemandDistribution& Q,
                              const SystemConfig& cfg, PsiAggregation aggregation) {
  const int n = cfg.num_users, m = cfg.num_files;
  if (n > 30)
    throw std::invalid_argument("psi: homogeneous fast path capped at n <= 30");
  const double M = cfg.cache_size[0];
  std::vector<double> p(static_cast<std::size_t>(m)), q(static_cast<std::size_t>(m));
  for (int f = 0; f < m; ++f) {
    p[static_cast<std::size_t>(f)] = P.p(f, 0) * M;
    q[static_cast<std::size_t>(f)] = Q.q(f, 0);
  }
  double psi = 0.0;
  std::vector<int> order(static_cast<std::size_t>(m));
  for (int ell = 1; ell <= n; ++ell) {
    std::vector<double> lam(static_cast<std::size_t>(m));
    for (int f = 0; f < m; ++f)
      lam[static_cast<std::size_t>(f)] =
          ipow(p[static_cast<std::size_t>(f)], ell - 1) * ipow(1.0 - p[static_cast<std::size_t>(f)], n - ell + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return lam[static_cast<std::size_t>(a)] > lam[static_cast<std::size_t>(b)];
    });
    double t_ell = 0.0;
    double mass_above = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
      const double lv = lam[static_cast<std::size_t>(order[i])];
      double group_mass = 0.0;
      while (i < order.size() && lam[static_cast<std::size_t>(order[i])] == lv) {
        group_mass += q[static_cast<std::size_t>(order[i])];
        ++i;
      }
      const double p_top = ipow(1.0 - mass_above, ell) - ipow(1.0 - mass_above - group_mass, ell);
      t_ell += lv * p_top;
      mass_above += group_mass;
    }
    const double weight = binomial(n, ell) * (aggregation == PsiAggregation::kLiteral ? ell : 1);
    psi += weight * t_ell;
  }
  return psi;
}

inline double psi_direct(const CachingDistribution& P, const DemandDistribution& Q,
                         const SystemConfig& cfg, const PsiOptions& opts) {
  const int n = cfg.num_users, m = cfg.num_files;
  if (n > kDirectUserCap)
    throw std::invalid_argument(
        "psi: direct subset enumeration capped at n <= 12; use the homogeneous fast path");
  Rng rng(derive_seed(opts.seed, 0xb0u));
  double psi = 0.0;
  // iterate user subsets in fixed bitmask order for a deterministic sum
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (int u = 0; u < n; ++u)
      if (mask & (1u << u)) subset.push_back(u);
    const int ell = static_cast<int>(subset.size());
    const std::vector<double> rho =
        rho_table(subset, P, Q, cfg, opts.rho, opts.mc_samples, &rng);
    for (int f = 0; f < m; ++f) {
      double agg = 0.0;
      for (int ui = 0; ui < ell; ++ui) {
        const double term = rho[static_cast<std::size_t>(f) * ell + ui] *
                            lambda_term(subset[static_cast<std::size_t>(ui)], f, subset, P, cfg);
        if (opts.aggregation == PsiAggregation::kLiteral)
          agg += term;
        else
          agg = std::max(agg, term);
      }
      psi += agg;
    }
  }
  return psi;
}

}  // namespace detail

// Probability that file f maximizes lambda(u, .) over the subset's requested
// files. Exposed mainly for tests; psi evaluates whole tables internally.
inline double rho_probability(int f, int u, const std::vector<int>& subset,
                              const CachingDistribution& P, const DemandDistribution& Q,
                              const SystemConfig& cfg,
                              RhoMethod method = RhoMethod::kExact,
                              long samples = 100000, std::uint64_t seed = 1) {
  const int ell = static_cast<int>(subset.size());
  int ui = -1;
  for (int i = 0; i < ell; ++i)
    if (subset[static_cast<std::size_t>(i)] == u) ui = i;
  if (ui < 0) throw std::invalid_argument("rho_probability: u not in subset");
  Rng rng(derive_seed(seed, 0x5e));
  const std::vector<double> table =
      detail::rho_table(subset, P, Q, cfg, method, samples, &rng);
  return table[static_cast<std::size_t>(f) * ell + ui];
}

inline double psi(const CachingDistribution& P, const DemandDistribution& Q,
                  const SystemConfig& cfg, const PsiOptions& opts = {}) {
  if (!opts.force_direct && opts.rho == RhoMethod::kExact &&
      detail::is_homogeneous(P, Q, cfg) && cfg.num_users <= 30)
    return detail::psi_homogeneous(P, Q, cfg, opts.aggregation);
  return detail::psi_direct(P, Q, cfg, opts);
}

inline BoundResult rate_upper_bound(const CachingDistribution& P,
                                    const DemandDistribution& Q,
                                    const SystemConfig& cfg,
                                    const PsiOptions& opts = {}) {
  BoundResult r;
  r.psi = psi(P, Q, cfg, opts);
  r.m_bar = m_bar(Q, cfg.num_users);
  r.r_ub = std::min(r.psi, r.m_bar);
  return r;
}

namespace detail {

// Projection onto {0 <= p_f <= ub, sum p = 1} by bisection on the shift.
inline void project_simplex_box(std::vector<double>& p, double ub) {
  double lo = -1.0 - ub, hi = 1.0 + ub;
  for (double v : p) {
    lo = std::min(lo, v - 1.0);
    hi = std::max(hi, v);
  }
  for (int it = 0; it < 100; ++it) {
    const double t = 0.5 * (lo + hi);
    double s = 0.0;
    for (double v : p) s += std::clamp(v - t, 0.0, ub);
    if (s > 1.0)
      lo = t;
    else
      hi = t;
  }
  const double t = 0.5 * (lo + hi);
  for (double& v : p) v = std::clamp(v - t, 0.0, ub);
  // absorb residual rounding into one coordinate with headroom
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  const double need = 1.0 - s;
  for (double& v : p) {
    if (v + need >= 0.0 && v + need <= ub) {
      v += need;
      break;
    }
  }
}

}  // namespace detail

struct OptimizedCaching {
  CachingDistribution P;
  BoundResult bound;
  int cutoff = 0;  // stage-1 truncation width, for provenance
};

// Two-stage search for the caching distribution minimizing the rate bound:
// a scan of truncated-uniform distributions over the most popular files,
// then a guarded coordinate-descent refinement (homogeneous inputs only).
inline OptimizedCaching optimize_caching_distribution(const DemandDistribution& Q,
                                                      const SystemConfig& cfg,
                                                      PsiOptions opts = {},
                                                      bool refine = true) {
  const int n = cfg.num_users, m = cfg.num_files;
  const bool homogeneous = Q.q.homogeneous() &&
      std::all_of(cfg.cache_size.begin(), cfg.cache_size.end(),
                  [&](double M) { return M == cfg.cache_size[0]; });
  const double M = cfg.cache_size[0];

  // popularity order (averaged over users for heterogeneous demand)
  std::vector<double> avg_q(static_cast<std::size_t>(m), 0.0);
  for (int f = 0; f < m; ++f)
    for (int u = 0; u < Q.q.users(); ++u) avg_q[static_cast<std::size_t>(f)] += Q.q(f, u);
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return avg_q[static_cast<std::size_t>(a)] > avg_q[static_cast<std::size_t>(b)];
  });

  const double max_M = *std::max_element(cfg.cache_size.begin(), cfg.cache_size.end());
  const int min_cutoff = std::max(1, static_cast<int>(std::ceil(max_M - 1e-9)));

  auto truncated = [&](int cutoff) {
    CachingDistribution P;
    P.p = ProbabilityMatrix(m, 1, 0.0);
    for (int i = 0; i < cutoff; ++i) P.p(order[static_cast<std::size_t>(i)], 0) = 1.0 / cutoff;
    return P;
  };

  OptimizedCaching best;
  bool first = true;
  // descending scan: ties resolve to the widest (most spread) cutoff
  for (int cutoff = m; cutoff >= min_cutoff; --cutoff) {
    CachingDistribution P = truncated(cutoff);
    const BoundResult r = rate_upper_bound(P, Q, cfg, opts);
    if (first || r.r_ub < best.bound.r_ub - 1e-12) {
      best.P = std::move(P);
      best.bound = r;
      best.cutoff = cutoff;
      first = false;
    }
  }

  if (refine && homogeneous && M > 0.0) {
    std::vector<double> p = best.P.p.column(0);
    const double ub = std::min(1.0, 1.0 / M);
    double step = 1.0 / m;
    int evals = 0;
    auto eval = [&](const std::vector<double>& cand) {
      CachingDistribution P;
      P.p = ProbabilityMatrix(m, 1);
      for (int f = 0; f < m; ++f) P.p(f, 0) = cand[static_cast<std::size_t>(f)];
      return rate_upper_bound(P, Q, cfg, opts);
    };
    while (step > 1e-6 && evals < 20000) {
      bool improved = false;
      for (int f = 0; f < m && evals < 20000; ++f) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> cand = p;
          cand[static_cast<std::size_t>(f)] += sign * step;
          detail::project_simplex_box(cand, ub);
          const BoundResult r = eval(cand);
          ++evals;
          if (r.r_ub < best.bound.r_ub - 1e-6) {
            p = cand;
            best.bound = r;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    CachingDistribution P;
    P.p = ProbabilityMatrix(m, 1);
    for (int f = 0; f < m; ++f) P.p(f, 0) = p[static_cast<std::size_t>(f)];
    best.P = std::move(P);
  }
  return best;
}

}  // namespace cmcast
