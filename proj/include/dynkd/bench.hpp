#ifndef DYNKD_BENCH_HPP
#define DYNKD_BENCH_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynkd/balance.hpp"
#include "dynkd/builder.hpp"
#include "dynkd/tree.hpp"
#include "dynkd/verify.hpp"

namespace dynkd::bench {

/// Largest n whose n*log2(n) does not exceed target (n >= 1). Maps the
/// equally spaced n*log2(n) axis back to tree sizes, e.g. 2e7 -> 1,003,201.
inline std::size_t solve_n(double target) {
  if (!(target > 0)) throw ContractViolation("solve_n: target must be positive");
  auto f = [](std::size_t n) {
    const long double x = static_cast<long double>(n);
    return x * std::log2(x);
  };
  const long double t = target;
  std::size_t lo = 1;  // f(lo) <= t always holds (f(1) == 0)
  std::size_t hi = 2;
  while (f(hi) <= t) hi *= 2;
  // Invariant: f(lo) <= t < f(hi).
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (f(mid) <= t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

/// The n grid values min(int64) + i*floor((2^64-1)/n), i = 0..n-1.
inline std::vector<Coord> spaced_grid(std::size_t n) {
  if (n == 0) throw ContractViolation("spaced_grid: n must be >= 1");
  const std::uint64_t spacing = std::numeric_limits<std::uint64_t>::max() / n;
  const auto base = static_cast<std::uint64_t>(std::numeric_limits<Coord>::min());
  std::vector<Coord> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    // (n-1)*spacing <= 2^64-1, so the offset never wraps; the sum is taken
    // mod 2^64 and read back as two's complement.
    grid[i] = static_cast<Coord>(base + static_cast<std::uint64_t>(i) * spacing);
  }
  return grid;
}

/// n tuples whose every coordinate column is an independent shuffle of the
/// spaced grid. One mt19937_64 stream seeded once drives all k shuffles.
inline std::vector<KTuple> generate_random(std::size_t n, std::size_t k,
                                           std::uint64_t seed = std::mt19937_64::default_seed) {
  if (k == 0) throw ContractViolation("generate_random: k must be >= 1");
  std::vector<Coord> column = spaced_grid(n);
  std::vector<std::vector<Coord>> coords(n, std::vector<Coord>(k));
  std::mt19937_64 rng(seed);
  for (std::size_t d = 0; d < k; ++d) {
    std::shuffle(column.begin(), column.end(), rng);
    for (std::size_t i = 0; i < n; ++i) coords[i][d] = column[i];
  }
  std::vector<KTuple> out;
  out.reserve(n);
  for (auto& c : coords) out.emplace_back(std::move(c));
  return out;
}

/// In-order sweep of a static tree built from `tuples` (worst-case order).
inline std::vector<KTuple> sorted_sweep(std::vector<KTuple> tuples) {
  NodePtr root = build_balanced(std::move(tuples), 0);
  return collect_subtree(root.get());
}

inline std::vector<KTuple> generate_sorted(std::size_t n, std::size_t k,
                                           std::uint64_t seed = std::mt19937_64::default_seed) {
  return sorted_sweep(generate_random(n, k, seed));
}

enum class Pattern { Random, Sorted };

inline std::string_view label(Pattern p) noexcept { return p == Pattern::Random ? "random" : "sorted"; }

inline std::optional<Pattern> parse_pattern(std::string_view s) {
  if (s == "random") return Pattern::Random;
  if (s == "sorted") return Pattern::Sorted;
  return std::nullopt;
}

enum class Operation { Insert, Verify, Search, Delete, StaticBuild };

inline std::string_view label(Operation op) noexcept {
  switch (op) {
    case Operation::Insert:
      return "insert";
    case Operation::Verify:
      return "verify";
    case Operation::Search:
      return "search";
    case Operation::Delete:
      return "delete";
    case Operation::StaticBuild:
      return "static_build";
  }
  return "?";
}

struct BenchConfig {
  std::size_t k = 3;
  /// n*log2(n) targets, converted with solve_n. Ignored when `ns` is set.
  std::vector<double> targets{1e6, 2e6, 3e6, 4e6};
  std::vector<std::size_t> ns;
  Pattern pattern = Pattern::Random;
  BalancePolicy policy = BalancePolicy::red_black();
  ReplacementStrategy strategy = ReplacementStrategy::HigherSubtree;
  std::size_t workers = 1;
  std::size_t parallel_threshold = kDefaultParallelThreshold;
  std::size_t repeats = 5;
  std::uint64_t seed = std::mt19937_64::default_seed;
  BuildAlgorithm algorithm = BuildAlgorithm::NLogN;

  std::vector<std::size_t> sizes() const {
    if (!ns.empty()) return ns;
    std::vector<std::size_t> out;
    out.reserve(targets.size());
    for (double t : targets) out.push_back(solve_n(t));
    return out;
  }

  void validate() const {
    if (k == 0) throw ContractViolation("bench: k must be >= 1");
    if (repeats == 0) throw ContractViolation("bench: repeats must be >= 1");
    if (workers == 0) throw ContractViolation("bench: workers must be >= 1");
    if (parallel_threshold == 0) throw ContractViolation("bench: rebuild threshold must be >= 1");
    if (ns.empty() && targets.empty()) throw ContractViolation("bench: no sizes given");
    for (std::size_t n : sizes()) {
      if (n == 0) throw ContractViolation("bench: every n must be >= 1");
    }
  }
};

struct BenchRecord {
  Operation operation;
  std::size_t n;
  Pattern pattern;
  std::string policy;
  std::string strategy;
  std::size_t workers;
  double mean_seconds;
  double stddev_seconds;
  std::size_t largest_rebuild;
  std::size_t tree_height;
};

struct MeanStd {
  double mean = 0;
  double stddev = 0;
};

/// Population mean and standard deviation.
inline MeanStd mean_std(std::span<const double> xs) {
  if (xs.empty()) return {};
  double sum = 0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

/// Least-squares fit of t = c * n*log2(n) through the origin, with the
/// coefficient of determination measured against the mean of t.
struct NLogNFit {
  double coefficient = 0;
  double r_squared = 0;
};

inline NLogNFit fit_nlogn(std::span<const std::size_t> ns, std::span<const double> times) {
  if (ns.size() != times.size() || ns.size() < 2) throw ContractViolation("fit_nlogn: need >= 2 paired samples");
  std::vector<double> x(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double n = static_cast<double>(ns[i]);
    x[i] = n * std::log2(n);
  }
  double sxy = 0, sxx = 0, mean_t = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * times[i];
    sxx += x[i] * x[i];
    mean_t += times[i];
  }
  mean_t /= static_cast<double>(x.size());
  const double c = sxx > 0 ? sxy / sxx : 0;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_res += (times[i] - c * x[i]) * (times[i] - c * x[i]);
    ss_tot += (times[i] - mean_t) * (times[i] - mean_t);
  }
  return {c, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

namespace detail {

using Clock = std::chrono::steady_clock;

template <class Fn>
double time_seconds(Fn&& fn) {
  const auto begin = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - begin).count();
}

inline void require_valid(const KdTree& tree, std::string_view phase, std::size_t n) {
  const VerifyReport report = verify(tree);
  if (!report.ok() || report.node_count != tree.size()) {
    std::ostringstream os;
    os << "bench: tree failed verification after " << phase << " (n=" << n << "): ";
    dump(os, report);
    throw std::runtime_error(os.str());
  }
}

}  // namespace detail

inline std::vector<KTuple> make_dataset(Pattern pattern, std::size_t n, std::size_t k, std::uint64_t seed) {
  return pattern == Pattern::Random ? generate_random(n, k, seed) : generate_sorted(n, k, seed);
}

/// Measures one n: insertion, a verify pass, search, deletion (all in
/// dataset order) and a static build, each `repeats` times. Throws if any
/// phase leaves an invalid tree.
inline std::vector<BenchRecord> run_size(const BenchConfig& cfg, std::size_t n, std::ostream* progress = nullptr) {
  const std::vector<KTuple> data = make_dataset(cfg.pattern, n, cfg.k, cfg.seed);
  TreeOptions opts;
  opts.k = cfg.k;
  opts.policy = cfg.policy;
  opts.strategy = cfg.strategy;
  opts.workers = cfg.workers;
  opts.parallel_threshold = cfg.parallel_threshold;
  opts.algorithm = cfg.algorithm;

  std::vector<double> t_insert, t_verify, t_search, t_delete, t_static;
  std::size_t insert_largest = 0, delete_largest = 0, height = 0, static_height = 0;

  for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
    KdTree tree(opts);
    t_insert.push_back(detail::time_seconds([&] {
      for (const auto& t : data) {
        if (!tree.insert(t)) throw std::runtime_error("bench: insert rejected tuple " + t.to_string());
      }
    }));
    insert_largest = std::max(insert_largest, tree.rebuild_stats().largest);
    height = tree.height();

    VerifyReport report;
    t_verify.push_back(detail::time_seconds([&] { report = verify(tree); }));
    if (!report.ok() || report.node_count != n) {
      std::ostringstream os;
      os << "bench: tree failed verification after insert (n=" << n << "): ";
      dump(os, report);
      throw std::runtime_error(os.str());
    }

    t_search.push_back(detail::time_seconds([&] {
      for (const auto& t : data) {
        if (!tree.contains(t)) throw std::runtime_error("bench: search missed tuple " + t.to_string());
      }
    }));

    tree.reset_rebuild_stats();
    t_delete.push_back(detail::time_seconds([&] {
      for (const auto& t : data) {
        if (!tree.erase(t)) throw std::runtime_error("bench: delete missed tuple " + t.to_string());
      }
    }));
    delete_largest = std::max(delete_largest, tree.rebuild_stats().largest);
    if (!tree.empty()) throw std::runtime_error("bench: tree not empty after delete phase");
    detail::require_valid(tree, "delete", n);

    std::vector<KTuple> copy = data;
    NodePtr static_root;
    t_static.push_back(detail::time_seconds([&] {
      static_root = build_parallel(std::move(copy), 0, cfg.workers, cfg.parallel_threshold, cfg.algorithm);
    }));
    static_height = node_height(static_root);
    KdTree static_tree(opts, std::move(static_root));
    if (static_tree.size() != n) throw std::runtime_error("bench: static build lost tuples");
    detail::require_valid(static_tree, "static build", n);

    if (progress) {
      *progress << "  n=" << n << " repeat " << (rep + 1) << '/' << cfg.repeats << " insert=" << t_insert.back()
                << "s delete=" << t_delete.back() << "s\n";
    }
  }

  const std::string policy = cfg.policy.label();
  const std::string strategy(label(cfg.strategy));
  auto record = [&](Operation op, const std::vector<double>& ts, std::size_t largest, std::size_t h) {
    const MeanStd ms = mean_std(ts);
    return BenchRecord{op, n, cfg.pattern, policy, strategy, cfg.workers, ms.mean, ms.stddev, largest, h};
  };
  return {
      record(Operation::Insert, t_insert, insert_largest, height),
      record(Operation::Verify, t_verify, 0, height),
      record(Operation::Search, t_search, 0, height),
      record(Operation::Delete, t_delete, delete_largest, height),
      record(Operation::StaticBuild, t_static, 0, static_height),
  };
}

inline std::vector<BenchRecord> run_suite(const BenchConfig& cfg, std::ostream* progress = nullptr) {
  cfg.validate();
  std::vector<BenchRecord> out;
  for (std::size_t n : cfg.sizes()) {
    if (progress) *progress << "n=" << n << " (" << label(cfg.pattern) << ", " << cfg.policy.label() << ")\n";
    auto rows = run_size(cfg, n, progress);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

inline constexpr std::string_view kCsvHeader =
    "operation,n,pattern,policy,strategy,workers,mean_s,stddev_s,largest_rebuild,tree_height";

inline void write_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << kCsvHeader << '\n';
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::fixed << std::setprecision(6);
  for (const auto& r : records) {
    os << label(r.operation) << ',' << r.n << ',' << label(r.pattern) << ',' << r.policy << ',' << r.strategy << ','
       << r.workers << ',' << r.mean_seconds << ',' << r.stddev_seconds << ',' << r.largest_rebuild << ','
       << r.tree_height << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

/// Plot-ready series: one row per record with the n*log2(n) abscissa.
inline void write_plot_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << "series,n,nlog2n,mean_s\n";
  const auto flags = os.flags();
  const auto precision = os.precision();
  for (const auto& r : records) {
    const double n = static_cast<double>(r.n);
    os << label(r.operation) << '_' << label(r.pattern) << '_' << r.policy << ',' << r.n << ',' << std::fixed
       << std::setprecision(0) << n * std::log2(n) << ',' << std::setprecision(6) << r.mean_seconds << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + ": " + std::strerror(errno));
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("error writing " + path + ": " + std::strerror(errno));
}

}  // namespace dynkd::bench

#endif  // DYNKD_BENCH_HPP
