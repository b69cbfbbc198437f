// kdbench: timed insert/verify/search/delete/static-build runs over the
// spaced-grid datasets, written as CSV.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dynkd/bench.hpp"

namespace {

void print_fits(const std::vector<dynkd::bench::BenchRecord>& records) {
  using dynkd::bench::Operation;
  for (auto op : {Operation::Insert, Operation::Search, Operation::Delete, Operation::StaticBuild}) {
    std::vector<std::size_t> ns;
    std::vector<double> ts;
    for (const auto& r : records) {
      if (r.operation == op) {
        ns.push_back(r.n);
        ts.push_back(r.mean_seconds);
      }
    }
    if (ns.size() < 2) continue;
    auto fit = dynkd::bench::fit_nlogn(ns, ts);
    std::cerr << "fit " << dynkd::bench::label(op) << ": t = " << fit.coefficient << " * n log2 n, R^2 = "
              << fit.r_squared << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark a dynamic, self-balancing k-d tree"};

  dynkd::bench::BenchConfig cfg;
  std::string pattern = "random";
  std::string balance = "redblack";
  std::string replacement = "higher";
  std::string algorithm = "nlogn";
  std::string csv_path;
  std::string plot_path;
  bool quiet = false;

  app.add_option("--k", cfg.k, "Tuple dimension")->check(CLI::PositiveNumber);
  app.add_option("--targets", cfg.targets, "Comma-separated n*log2(n) targets")->delimiter(',');
  app.add_option("--n", cfg.ns, "Comma-separated tree sizes (overrides --targets)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app.add_option("--pattern", pattern, "random|sorted")->check(CLI::IsMember({"random", "sorted"}));
  app.add_option("--balance", balance, "avl1|avl2|avl3|avl4|redblack")
      ->check(CLI::IsMember({"avl1", "avl2", "avl3", "avl4", "redblack"}));
  app.add_option("--replacement", replacement, "higher|successor")->check(CLI::IsMember({"higher", "successor"}));
  app.add_option("--workers", cfg.workers, "Threads per rebuild")->check(CLI::PositiveNumber);
  app.add_option("--rebuild-threshold", cfg.parallel_threshold, "Sub-problem size above which rebuilds go parallel")
      ->check(CLI::PositiveNumber);
  app.add_option("--repeats", cfg.repeats, "Repetitions per measurement")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "mt19937_64 seed");
  app.add_option("--algorithm", algorithm, "Rebuild algorithm: nlogn|knlogn")
      ->check(CLI::IsMember({"nlogn", "knlogn"}));
  app.add_option("--csv", csv_path, "Output CSV path (default: stdout)");
  app.add_option("--plot", plot_path, "Also write plot series (series,n,nlog2n,mean_s) to this path");
  app.add_flag("--quiet", quiet, "No progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.pattern = *dynkd::bench::parse_pattern(pattern);
    cfg.policy = *dynkd::BalancePolicy::parse(balance);
    cfg.strategy = *dynkd::parse_strategy(replacement);
    cfg.algorithm = algorithm == "knlogn" ? dynkd::BuildAlgorithm::KnLogN : dynkd::BuildAlgorithm::NLogN;

    // Fail on an unwritable path before spending time on the run.
    if (!csv_path.empty()) dynkd::bench::write_file(csv_path, [](std::ostream&) {});

    auto records = dynkd::bench::run_suite(cfg, quiet ? nullptr : &std::cerr);

    if (csv_path.empty()) {
      dynkd::bench::write_csv(std::cout, records);
    } else {
      dynkd::bench::write_file(csv_path, [&](std::ostream& os) { dynkd::bench::write_csv(os, records); });
    }
    if (!plot_path.empty()) {
      dynkd::bench::write_file(plot_path, [&](std::ostream& os) { dynkd::bench::write_plot_csv(os, records); });
    }
    if (!quiet) print_fits(records);
  } catch (const std::exception& e) {
    std::cerr << "kdbench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
