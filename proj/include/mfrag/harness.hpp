#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfrag/fragmentation.hpp"
#include "mfrag/metric.hpp"
#include "mfrag/radii.hpp"

namespace mfrag {

enum class ScheduleChoice { optimal, mn07, file };
enum class OutputFormat { json, csv };

struct ExperimentConfig {
  std::string input_path;  ///< distance-matrix file; exclusive with generator
  std::string generator;   ///< generator spec string
  double distortion = 0.0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  ScheduleChoice schedule = ScheduleChoice::optimal;
  std::string schedule_path;  ///< for ScheduleChoice::file
  OutputFormat output = OutputFormat::json;
  bool checks = false;
  bool include_runs = false;  ///< embed every FragmentationResult in the JSON report
  unsigned threads = 0;       ///< 0: METRIC_FRAG_THREADS, else hardware concurrency
};

/// Failure carrying the process exit code the CLI should use:
/// 2 configuration, 3 input, 4 invariant violation.
class HarnessError : public std::runtime_error {
 public:
  HarnessError(int exit_code, const std::string& what) : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

inline constexpr int kExitConfig = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitInvariant = 4;

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::optional<double> u;
  std::size_t survivors = 0;
  std::size_t levels = 0;
  std::vector<std::string> violations;
  std::optional<FragmentationResult> run;
};

struct ExperimentReport {
  std::string input;
  std::size_t n = 0;
  double distortion = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::string schedule;
  double scale_factor = 1.0;  ///< input distances = normalized distances * factor
  double beta = 0.0;          ///< beta(2/D)
  double bound = 0.0;         ///< n^(1 - beta)
  double jensen_bound = 0.0;
  std::vector<TrialRecord> records;  ///< in trial order
  std::vector<std::size_t> sizes_sorted;
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t max = 0;
  std::size_t min = 0;
  bool checks = false;
  std::size_t checks_passed = 0;
  std::size_t checks_failed = 0;
  double wall_clock_seconds = 0.0;
};

/// Seed of trial `index` under a master seed: derive_seed(master, index), a
/// splitmix64 split, so trials never share a stream.
std::uint64_t trial_seed(std::uint64_t master, std::size_t index);

/// Thread cap from METRIC_FRAG_THREADS, else hardware concurrency (at least 1).
unsigned default_threads();

/// Loads the input named by the config: parses and validates the file, or
/// builds the generator family. Throws HarnessError.
FiniteMetricSpace load_input(const ExperimentConfig& config);

/// Runs the fragmentation experiment. When checks are on every trial is
/// verified; the report records failures and run() then throws HarnessError
/// with exit code 4 naming the first offending trial seed.
ExperimentReport run(const ExperimentConfig& config);

/// Same, with the report returned even when checks fail.
ExperimentReport run_unchecked(const ExperimentConfig& config);

std::string report_to_json(const ExperimentReport& report, bool include_timing = true);
std::string report_to_csv(const ExperimentReport& report);

/// {n, D, u, seed, scales[], levels[][], survivors[], ultrametric_pairs[]}
std::string result_to_json(const FragmentationResult& result);

}  // namespace mfrag
