#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rfidloc/config.hpp"
#include "rfidloc/method.hpp"
#include "rfidloc/solver.hpp"

namespace rfidloc {

struct BenchConfig {
  RunConfig run;
  std::vector<Method> methods;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// One located tag in one trial.
struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t trial_seed = 0;
  std::size_t method = 0;  // index into BenchReport::methods
  std::string tag_id;
  Position3D estimate;
  AxisErrors error;
};

struct ErrorStats {
  std::string method;
  std::string tag_id;  // empty for the all-tags aggregate
  std::size_t count = 0;
  double mean = 0.0;  // combined Y/Z error, meters
  double median = 0.0;
  double max = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double mean_z = 0.0;
};

struct BenchReport {
  std::vector<std::string> methods;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;  // trial-major, then method, then tag
  std::vector<ErrorStats> stats;     // per method: aggregate first, then per tag
  double runtime_seconds = 0.0;      // wall clock; not written to report files
};

/// Trial t re-seeds the scenario with derive_seed(seed, t), synthesizes once
/// and locates every tag with every method on that same data. Trials may run
/// in parallel; the report does not depend on the thread count.
BenchReport run_bench(const BenchConfig& config);

/// Summary statistics from raw records, in the same layout as BenchReport::stats.
std::vector<ErrorStats> summarize(std::span<const TrialRecord> records, std::span<const std::string> methods);

/// Mean combined error over tags, one value per trial, for method `method`.
std::vector<double> per_trial_means(const BenchReport& report, std::size_t method);

void write_report_text(std::ostream& out, const BenchReport& report);
/// Raw per-trial records: trial,trial_seed,method,tag_id,est_x,est_y,est_z,err_x,err_y,err_z,err_yz
void write_report_csv(std::ostream& out, const BenchReport& report);
/// Parses write_report_csv output; `methods` receives method labels in first-seen order.
std::vector<TrialRecord> parse_report_csv(std::istream& in, std::vector<std::string>& methods);

struct PairedTest {
  std::size_t n = 0;
  double mean_difference = 0.0;  // mean(a - b)
  double t = 0.0;
  double p_less = 1.0;  // one-sided p-value for mean(a - b) < 0
};

/// Paired Student t-test on a[i] - b[i].
PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace rfidloc
