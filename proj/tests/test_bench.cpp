#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "dynkd/bench.hpp"
#include "fixtures.hpp"

namespace bench = dynkd::bench;
using dynkd::KTuple;

TEST(SolveN, BenchmarkRangeEndpoints) {
  EXPECT_EQ(bench::solve_n(2e7), 1003201u);
  EXPECT_EQ(bench::solve_n(1e8), 4523071u);
}

TEST(SolveN, SmallTargets) {
  EXPECT_EQ(bench::solve_n(2), 2u);
  EXPECT_EQ(bench::solve_n(1), 1u);
  EXPECT_THROW(bench::solve_n(0), dynkd::ContractViolation);
}

TEST(SolveN, TableSizesInThousands) {
  const std::size_t expected[] = {1003, 1465, 1917, 2362, 2801, 3237, 3669, 4097, 4523};
  for (int i = 0; i < 9; ++i) {
    const std::size_t n = bench::solve_n((2 + i) * 1e7);
    EXPECT_EQ((n + 500) / 1000, expected[i]) << i;
  }
}

TEST(SolveN, IsLargestNotExceedingTarget) {
  for (double t : {10.0, 1e3, 12345.0, 5e6}) {
    const auto n = static_cast<double>(bench::solve_n(t));
    EXPECT_LE(n * std::log2(n), t);
    EXPECT_GT((n + 1) * std::log2(n + 1), t);
  }
}

TEST(SpacedGrid, FourPoints) {
  // floor((2^64-1)/4) = 4611686018427387903, offsets from INT64_MIN.
  EXPECT_EQ(bench::spaced_grid(4),
            (std::vector<dynkd::Coord>{INT64_MIN, -4611686018427387905LL, -2LL, 4611686018427387901LL}));
  EXPECT_EQ(bench::spaced_grid(1), std::vector<dynkd::Coord>{INT64_MIN});
}

TEST(GenerateRandom, Deterministic) {
  EXPECT_EQ(bench::generate_random(500, 3, 42), bench::generate_random(500, 3, 42));
  EXPECT_NE(bench::generate_random(500, 3, 42), bench::generate_random(500, 3, 43));
}

TEST(GenerateRandom, SingleColumnIsPermutationOfGrid) {
  auto ts = bench::generate_random(4, 1, 7);
  std::vector<dynkd::Coord> col;
  for (const auto& t : ts) col.push_back(t[0]);
  std::sort(col.begin(), col.end());
  EXPECT_EQ(col, (std::vector<dynkd::Coord>{INT64_MIN, -4611686018427387905LL, -2LL, 4611686018427387901LL}));
}

TEST(GenerateRandom, ColumnsShareTheGridButDiffer) {
  const std::size_t n = 2000000;
  auto ts = bench::generate_random(n, 3);
  std::vector<std::vector<dynkd::Coord>> cols(3);
  for (const auto& t : ts) {
    for (std::size_t d = 0; d < 3; ++d) cols[d].push_back(t[d]);
  }
  EXPECT_NE(cols[0], cols[1]);
  EXPECT_NE(cols[1], cols[2]);
  for (auto& c : cols) std::sort(c.begin(), c.end());
  EXPECT_EQ(cols[0], cols[1]);
  EXPECT_EQ(cols[1], cols[2]);
  EXPECT_EQ(cols[0], bench::spaced_grid(n));
}

TEST(GenerateSorted, ChainTuplesSweepInXyzOrder) {
  EXPECT_EQ(bench::sorted_sweep(fixtures::chain_tuples()), (std::vector<KTuple>{{8, 1, 5}, {8, 3, 2}, {9, 2, 1}}));
}

// In-order of a static tree is sorted only relative to each node's own
// split, not globally by x:y:z once k > 1.
TEST(GenerateSorted, MatchesInOrderOfNaiveStaticTree) {
  auto random = bench::generate_random(5000, 3);
  auto sorted = bench::generate_sorted(5000, 3);
  auto ref = fixtures::reference_build(random, 0);
  std::vector<KTuple> expect;
  dynkd::collect_subtree(ref.get(), expect);
  EXPECT_EQ(sorted, expect);

  // root split: everything before the root sorts below it on x:y:z
  const std::size_t mid = (sorted.size() - 1) / 2;
  EXPECT_EQ(sorted[mid], ref->tuple);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const int c = fixtures::brute_compare(sorted[i], sorted[mid], 0);
    EXPECT_EQ(c < 0, i < mid) << i;
  }
}

TEST(MeanStd, Population) {
  const double xs[] = {2, 4, 4, 4, 5, 5, 7, 9};
  auto ms = bench::mean_std(xs);
  EXPECT_DOUBLE_EQ(ms.mean, 5.0);
  EXPECT_DOUBLE_EQ(ms.stddev, 2.0);
}

TEST(FitNLogN, ExactDataHasUnitR2) {
  const std::size_t ns[] = {1000, 2000, 4000, 8000};
  std::vector<double> ts;
  for (auto n : ns) ts.push_back(3e-9 * static_cast<double>(n) * std::log2(static_cast<double>(n)));
  auto fit = bench::fit_nlogn(ns, ts);
  EXPECT_NEAR(fit.coefficient, 3e-9, 1e-18);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
}

TEST(FitNLogN, QuadraticDataFitsWorse) {
  const std::size_t ns[] = {1000, 2000, 4000, 8000};
  std::vector<double> ts;
  for (auto n : ns) ts.push_back(static_cast<double>(n) * static_cast<double>(n));
  EXPECT_LT(bench::fit_nlogn(ns, ts).r_squared, 0.95);
}

namespace {

bench::BenchConfig small_config(bench::Pattern pattern) {
  bench::BenchConfig cfg;
  cfg.ns = {1000, 3000};
  cfg.repeats = 2;
  cfg.pattern = pattern;
  return cfg;
}

std::string non_timing_csv(const std::vector<bench::BenchRecord>& records) {
  auto copy = records;
  for (auto& r : copy) r.mean_seconds = r.stddev_seconds = 0;
  std::ostringstream os;
  bench::write_csv(os, copy);
  return os.str();
}

}  // namespace

TEST(RunSuite, CsvHeaderAndRows) {
  auto records = bench::run_suite(small_config(bench::Pattern::Random));
  ASSERT_EQ(records.size(), 10u);
  std::ostringstream os;
  bench::write_csv(os, records);
  std::istringstream lines(os.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "operation,n,pattern,policy,strategy,workers,mean_s,stddev_s,largest_rebuild,tree_height");
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("insert,1000,random,redblack,higher,1,", 0), 0u) << line;
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 9);
  EXPECT_EQ(os.str().back(), '\n');
  for (const auto& r : records) {
    EXPECT_GE(r.stddev_seconds, 0.0);
    EXPECT_GT(r.tree_height, 0u);
  }
}

TEST(RunSuite, NonTimingFieldsAreDeterministic) {
  for (auto pattern : {bench::Pattern::Random, bench::Pattern::Sorted}) {
    auto cfg = small_config(pattern);
    EXPECT_EQ(non_timing_csv(bench::run_suite(cfg)), non_timing_csv(bench::run_suite(cfg)));
  }
}

TEST(RunSuite, StaticBuildFasterThanInsertForRandomData) {
  bench::BenchConfig cfg;
  cfg.ns = {50000, 100000};
  cfg.repeats = 2;
  auto records = bench::run_suite(cfg);
  for (std::size_t n : cfg.ns) {
    double insert = 0, build = 0;
    for (const auto& r : records) {
      if (r.n != n) continue;
      if (r.operation == bench::Operation::Insert) insert = r.mean_seconds;
      if (r.operation == bench::Operation::StaticBuild) build = r.mean_seconds;
    }
    EXPECT_LT(build, insert) << "n=" << n;
  }
}

TEST(RunSuite, RejectsInvalidConfig) {
  bench::BenchConfig cfg;
  cfg.repeats = 0;
  EXPECT_THROW(bench::run_suite(cfg), dynkd::ContractViolation);
  cfg = {};
  cfg.ns = {0};
  EXPECT_THROW(bench::run_suite(cfg), dynkd::ContractViolation);
}

TEST(WriteFile, ReportsPathAndCause) {
  try {
    bench::write_file("/nonexistent-dir/x.csv", [](std::ostream&) {});
    FAIL() << "expected failure";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("No such file"), std::string::npos) << e.what();
  }
}
