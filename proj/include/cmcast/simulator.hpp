#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmcast/bound.hpp"
#include "cmcast/conflict_graph.hpp"
#include "cmcast/delivery.hpp"
#include "cmcast/gcc.hpp"
#include "cmcast/grasp.hpp"
#include "cmcast/model.hpp"
#include "cmcast/oracle.hpp"
#include "cmcast/placement.hpp"
#include "cmcast/rng.hpp"

namespace cmcast {

enum class PlacementPolicy { kRapPstar, kRapUniform, kLfu };

struct ExperimentConfig {
  int users = 10;
  int files = 250;
  int packets = 100;
  std::vector<double> cache_sizes;
  double alpha = 0.2;
  std::vector<std::string> schemes;  // gcc, grasp, lfu, oracle
  PlacementPolicy placement = PlacementPolicy::kRapPstar;
  int grasp_iterations = 100;
  int trials = 200;
  std::uint64_t seed = 1;
  std::string output;
  std::string dimacs_dir;
  bool bound_only = false;
  bool fix_placement = false;
  bool no_timestamp = false;

  void check() const {
    if (users < 1 || files < 1 || packets < 1)
      throw std::invalid_argument("config: users, files and packets must be >= 1");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (cache_sizes.empty()) throw std::invalid_argument("config: cache-sizes is empty");
    for (double M : cache_sizes)
      if (M < 0 || M > files)
        throw std::invalid_argument("config: cache sizes must lie in [0, files]");
    for (const std::string& s : schemes)
      if (s != "gcc" && s != "grasp" && s != "lfu" && s != "oracle")
        throw std::invalid_argument("config: unknown scheme '" + s + "'");
  }
};

inline const char* placement_name(PlacementPolicy p) {
  switch (p) {
    case PlacementPolicy::kRapPstar: return "rap-pstar";
    case PlacementPolicy::kRapUniform: return "rap-uniform";
    case PlacementPolicy::kLfu: return "lfu";
  }
  return "?";
}

inline PlacementPolicy placement_from_name(const std::string& s) {
  if (s == "rap-pstar") return PlacementPolicy::kRapPstar;
  if (s == "rap-uniform") return PlacementPolicy::kRapUniform;
  if (s == "lfu") return PlacementPolicy::kLfu;
  throw std::invalid_argument("unknown placement policy '" + s + "'");
}

// key=value config file; '#' comments and blank lines ignored; `scheme` and
// `cache-sizes` accumulate. CLI flags override whatever the file set.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  cfg.schemes.clear();
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> std::runtime_error {
    return std::runtime_error("line " + std::to_string(lineno) + ": " + what);
  };
  auto parse_real = [&](const std::string& v) {
    std::size_t pos = 0;
    double x;
    try {
      x = std::stod(v, &pos);
    } catch (...) {
      throw fail("expected real");
    }
    if (pos != v.size()) throw fail("expected real");
    return x;
  };
  auto parse_int = [&](const std::string& v) {
    std::size_t pos = 0;
    long x;
    try {
      x = std::stol(v, &pos);
    } catch (...) {
      throw fail("expected integer");
    }
    if (pos != v.size()) throw fail("expected integer");
    return static_cast<int>(x);
  };
  auto parse_bool = [&](const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw fail("expected boolean");
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail("expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "users") cfg.users = parse_int(value);
    else if (key == "files") cfg.files = parse_int(value);
    else if (key == "packets") cfg.packets = parse_int(value);
    else if (key == "alpha") cfg.alpha = parse_real(value);
    else if (key == "cache-sizes") {
      std::stringstream ss(value);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.cache_sizes.push_back(parse_real(trim(tok)));
    } else if (key == "scheme") cfg.schemes.push_back(value);
    else if (key == "placement") cfg.placement = placement_from_name(value);
    else if (key == "grasp-iterations") cfg.grasp_iterations = parse_int(value);
    else if (key == "trials") cfg.trials = parse_int(value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "output") cfg.output = value;
    else if (key == "export-dimacs") cfg.dimacs_dir = value;
    else if (key == "bound-only") cfg.bound_only = parse_bool(value);
    else if (key == "fix-placement") cfg.fix_placement = parse_bool(value);
    else if (key == "no-timestamp") cfg.no_timestamp = parse_bool(value);
    else throw fail("unknown key '" + key + "'");
  }
  return cfg;
}

// LFU delivers uncoded: the rate is the number of distinct requested files
// that at least one requester does not hold in its (whole-file) LFU cache.
inline RateSample lfu_rate(const DemandDistribution& Q, const DemandVector& demand,
                           const SystemConfig& cfg) {
  const int m = cfg.num_files;
  std::vector<char> needed(static_cast<std::size_t>(m), 0);
  for (int u = 0; u < cfg.num_users; ++u) {
    const int f = demand.file[static_cast<std::size_t>(u)];
    if (needed[static_cast<std::size_t>(f)]) continue;
    const std::vector<int> top = lfu_top_files(Q, u, m, cfg.cache_size[static_cast<std::size_t>(u)]);
    if (std::find(top.begin(), top.end(), f) == top.end()) needed[static_cast<std::size_t>(f)] = 1;
  }
  int files_sent = 0;
  for (char c : needed) files_sent += c;
  return RateSample::make(files_sent * cfg.packets_per_file, cfg.packets_per_file, "lfu");
}

struct TrialResult {
  std::map<std::string, RateSample> reported;   // after the min-with-LFU rule
  std::map<std::string, int> raw_colors;        // scheme coloring size before the rule
  std::uint64_t demand_hash = 0;
  double wall_ms = 0.0;
};

// Per-cache-size immutable context shared by all trials of that sweep point.
struct SweepPoint {
  SystemConfig sys;
  DemandDistribution Q;
  CachingDistribution P;
  std::optional<BoundResult> bound;  // only for RAP placements
  double M = 0.0;
  int m_index = 0;
};

namespace detail {

inline std::uint64_t hash_demand(const DemandVector& d) {
  std::uint64_t h = 1469598103934665603ULL;
  for (int f : d.file) {
    h ^= static_cast<std::uint64_t>(f);
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace detail

inline SweepPoint make_sweep_point(const ExperimentConfig& exp, double M, int m_index,
                                   PsiAggregation bound_aggregation = PsiAggregation::kPerSubsetMax) {
  SweepPoint pt;
  pt.M = M;
  pt.m_index = m_index;
  pt.sys = SystemConfig::homogeneous(exp.users, exp.files, exp.packets, M);
  pt.Q = zipf_distribution(exp.files, exp.alpha, exp.users);
  PsiOptions opts;
  opts.aggregation = bound_aggregation;
  switch (exp.placement) {
    case PlacementPolicy::kRapPstar: {
      if (M > 0) {
        OptimizedCaching opt = optimize_caching_distribution(pt.Q, pt.sys, opts);
        pt.P = std::move(opt.P);
        pt.bound = opt.bound;
      } else {
        pt.P = uniform_caching_distribution(exp.files);
        pt.bound = rate_upper_bound(pt.P, pt.Q, pt.sys, opts);
      }
      break;
    }
    case PlacementPolicy::kRapUniform:
      pt.P = uniform_caching_distribution(exp.files);
      pt.bound = rate_upper_bound(pt.P, pt.Q, pt.sys, opts);
      break;
    case PlacementPolicy::kLfu:
      pt.P = uniform_caching_distribution(exp.files);  // unused for delivery
      break;
  }
  if (auto err = validate(pt.sys, pt.Q, pt.P))
    throw std::runtime_error("sweep point invalid: " + *err);
  return pt;
}

inline TrialResult run_trial(const SweepPoint& pt, const ExperimentConfig& exp,
                             int trial_index) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t m_bits = std::bit_cast<std::uint64_t>(pt.M);
  const int placement_trial = exp.fix_placement ? 0 : trial_index;
  Rng placement_rng(derive_seed(exp.seed, m_bits, static_cast<std::uint64_t>(placement_trial), 1));
  Rng demand_rng(derive_seed(exp.seed, m_bits, static_cast<std::uint64_t>(trial_index), 2));
  Rng scheme_rng(derive_seed(exp.seed, m_bits, static_cast<std::uint64_t>(trial_index), 3));

  const CachePlacement placement =
      exp.placement == PlacementPolicy::kLfu ? lfu_place(pt.sys, pt.Q)
                                             : rap_place(pt.sys, pt.P, placement_rng);
  const DemandVector demand = sample_demand(pt.Q, pt.sys.num_users, demand_rng);
  const ConflictGraph graph = ConflictGraph::build(placement, demand, pt.sys);

  TrialResult res;
  res.demand_hash = detail::hash_demand(demand);
  const RateSample lfu = lfu_rate(pt.Q, demand, pt.sys);

  for (const std::string& scheme : exp.schemes) {
    if (scheme == "lfu") {
      res.reported.emplace("lfu", lfu);
      res.raw_colors.emplace("lfu", lfu.colors);
      continue;
    }
    Coloring coloring;
    if (scheme == "gcc") {
      const UserSets K = UserSets::build(graph, placement, demand);
      coloring = gcc(graph, K, scheme_rng);
    } else if (scheme == "grasp") {
      GraspParams params;
      params.max_iterations = exp.grasp_iterations;
      params.seed = derive_seed(exp.seed, m_bits, static_cast<std::uint64_t>(trial_index), 5);
      coloring = grasp(graph, params);
    } else {  // oracle
      coloring = chromatic_number(graph).witness;
    }
#ifndef NDEBUG
    {
      Rng payload_rng(derive_seed(exp.seed, m_bits, static_cast<std::uint64_t>(trial_index), 4));
      if (auto err = verify_round_trip(placement, demand, graph, coloring, payload_rng, 8))
        throw std::runtime_error("round trip failed (" + scheme + "): " + *err);
    }
#endif
    RateSample raw = RateSample::make(coloring.num_colors, pt.sys.packets_per_file, scheme);
    res.raw_colors.emplace(scheme, raw.colors);
    // the source pre-evaluates LFU and serves whichever is cheaper
    if (lfu.rate < raw.rate) {
      RateSample capped = lfu;
      capped.scheme = scheme;
      res.reported.emplace(scheme, capped);
    } else {
      res.reported.emplace(scheme, raw);
    }
  }

  if (!exp.dimacs_dir.empty()) {
    const std::filesystem::path path =
        std::filesystem::path(exp.dimacs_dir) /
        ("trial_" + detail::format_double(pt.M) + "_" + std::to_string(trial_index) + ".col");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    export_dimacs(graph, out);
  }

  res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

struct SummaryRow {
  std::string scheme;
  double M = 0.0;
  double avg_rate = 0.0;
  double std_rate = 0.0;
  double avg_colors = 0.0;
  std::optional<double> r_ub;
  long runtime_ms = 0;
};

// Runs the full sweep and writes the CSV. Returns the summary rows.
inline std::vector<SummaryRow> run_experiment(const ExperimentConfig& exp, std::ostream& csv) {
  exp.check();
  csv << "# tool=cmcast\n";
  csv << "# users=" << exp.users << " files=" << exp.files << " packets=" << exp.packets
      << " alpha=" << detail::format_double(exp.alpha) << '\n';
  csv << "# placement=" << placement_name(exp.placement)
      << " grasp-iterations=" << exp.grasp_iterations << " trials=" << exp.trials
      << " seed=" << exp.seed << " fix-placement=" << (exp.fix_placement ? 1 : 0) << '\n';
  if (!exp.no_timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    csv << "# generated=" << buf << '\n';
  }
  csv << "scheme,n,m,B,alpha,M,trials,avg_rate,std_rate,avg_colors,r_ub,seed,runtime_ms\n";

  std::vector<SummaryRow> rows;
  auto emit = [&](const SummaryRow& row) {
    csv << row.scheme << ',' << exp.users << ',' << exp.files << ',' << exp.packets << ','
        << detail::format_double(exp.alpha) << ',' << detail::format_double(row.M) << ','
        << exp.trials << ',' << detail::format_double(row.avg_rate) << ','
        << detail::format_double(row.std_rate) << ','
        << detail::format_double(row.avg_colors) << ',';
    if (row.r_ub) csv << detail::format_double(*row.r_ub);
    csv << ',' << exp.seed << ',' << (exp.no_timestamp ? 0 : row.runtime_ms) << '\n';
    rows.push_back(row);
  };

  for (int mi = 0; mi < static_cast<int>(exp.cache_sizes.size()); ++mi) {
    const double M = exp.cache_sizes[static_cast<std::size_t>(mi)];
    const auto t0 = std::chrono::steady_clock::now();
    const SweepPoint pt = make_sweep_point(exp, M, mi);
    const long bound_ms = static_cast<long>(
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());

    if (pt.bound) {
      SummaryRow row;
      row.scheme = "bound";
      row.M = M;
      row.avg_rate = pt.bound->r_ub;
      row.r_ub = pt.bound->r_ub;
      row.runtime_ms = bound_ms;
      emit(row);
    }
    if (exp.bound_only) {
      csv.flush();
      continue;
    }

    struct Acc {
      double sum = 0.0, sumsq = 0.0, colors = 0.0, ms = 0.0;
    };
    std::map<std::string, Acc> acc;
    for (int t = 0; t < exp.trials; ++t) {
      const TrialResult tr = run_trial(pt, exp, t);
      for (const auto& [scheme, sample] : tr.reported) {
        Acc& a = acc[scheme];
        a.sum += sample.rate;
        a.sumsq += sample.rate * sample.rate;
        a.colors += tr.raw_colors.at(scheme);
        a.ms += tr.wall_ms / static_cast<double>(tr.reported.size());
      }
    }
    for (const std::string& scheme : exp.schemes) {
      const Acc& a = acc.at(scheme);
      SummaryRow row;
      row.scheme = scheme;
      row.M = M;
      row.avg_rate = a.sum / exp.trials;
      const double var =
          exp.trials > 1 ? std::max(0.0, (a.sumsq - a.sum * a.sum / exp.trials) / (exp.trials - 1)) : 0.0;
      row.std_rate = std::sqrt(var);
      row.avg_colors = a.colors / exp.trials;
      if (pt.bound && (scheme == "gcc" || scheme == "grasp")) row.r_ub = pt.bound->r_ub;
      row.runtime_ms = static_cast<long>(a.ms);
      emit(row);
    }
    csv.flush();
  }
  return rows;
}

}  // namespace cmcast
