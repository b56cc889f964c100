#include "mfrag/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mfrag/errors.hpp"
#include "mfrag/exponents.hpp"
#include "mfrag/generators.hpp"
#include "mfrag/io.hpp"
#include "mfrag/random.hpp"

namespace mfrag {

namespace {

using nlohmann::json;

// Stream 0 of a trial seed drives the schedule; streams 1..N drive the
// fragmentation levels.
constexpr std::uint64_t kScheduleStream = 0;

json result_json(const FragmentationResult& result) {
  json levels = json::array();
  for (const auto& level : result.levels) {
    json row = json::array();
    for (ClusterId id : level.cluster_of) row.push_back(id == kNoCluster ? json(nullptr) : json(id));
    levels.push_back(std::move(row));
  }
  json pairs = json::array();
  if (result.survivors.size() >= 2) {
    const auto tree = ultrametric_of(result);
    for (std::size_t a = 0; a < tree.size(); ++a) {
      for (std::size_t b = a + 1; b < tree.size(); ++b) {
        pairs.push_back({{"x", tree.points()[a]},
                         {"y", tree.points()[b]},
                         {"level", tree.level(a, b)},
                         {"value", tree.value(a, b)}});
      }
    }
  }
  return {{"n", result.n},
          {"D", result.distortion},
          {"u", result.u ? json(*result.u) : json(nullptr)},
          {"seed", result.seed},
          {"scales", result.scales},
          {"levels", std::move(levels)},
          {"survivors", result.survivors},
          {"ultrametric_pairs", std::move(pairs)}};
}

const char* schedule_name(ScheduleChoice choice) {
  switch (choice) {
    case ScheduleChoice::optimal: return "optimal";
    case ScheduleChoice::mn07: return "mn07";
    case ScheduleChoice::file: return "file";
  }
  return "unknown";
}

void validate_config(const ExperimentConfig& config) {
  if (config.input_path.empty() == config.generator.empty()) {
    throw HarnessError(kExitConfig, "exactly one of --input and --generator is required");
  }
  if (!(config.distortion > 2.0) || !std::isfinite(config.distortion)) {
    throw HarnessError(kExitConfig, "--distortion must be a finite value above 2");
  }
  if (config.trials < 1) throw HarnessError(kExitConfig, "--trials must be at least 1");
  if (config.schedule == ScheduleChoice::file && config.schedule_path.empty()) {
    throw HarnessError(kExitConfig, "--schedule file: needs a path");
  }
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::size_t index) {
  return derive_seed(master, static_cast<std::uint64_t>(index));
}

unsigned default_threads() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("METRIC_FRAG_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

FiniteMetricSpace load_input(const ExperimentConfig& config) {
  if (!config.generator.empty()) {
    GeneratorSpec spec;
    try {
      spec = parse_generator_spec(config.generator);
    } catch (const Error& e) {
      throw HarnessError(kExitConfig, e.what());
    }
    try {
      return generate(spec);
    } catch (const Error& e) {
      throw HarnessError(kExitInput, e.what());
    }
  }
  try {
    return parse_matrix_file(config.input_path);
  } catch (const Error& e) {
    throw HarnessError(kExitInput, config.input_path + ": " + e.what());
  }
}

ExperimentReport run_unchecked(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  validate_config(config);

  std::optional<RadiiSchedule> fixed_schedule;
  if (config.schedule == ScheduleChoice::file) {
    try {
      fixed_schedule = parse_schedule_file(config.schedule_path);
    } catch (const Error& e) {
      throw HarnessError(kExitInput, config.schedule_path + ": " + e.what());
    }
  }

  const auto input = load_input(config);
  ExperimentReport report;
  report.input = config.generator.empty() ? config.input_path : config.generator;
  report.n = input.size();
  report.distortion = config.distortion;
  report.trials = config.trials;
  report.seed = config.seed;
  report.schedule = schedule_name(config.schedule);
  report.checks = config.checks;

  FiniteMetricSpace space = input;
  if (input.size() >= 2) {
    auto [normalized, factor] = normalize(input);
    space = std::move(normalized);
    report.scale_factor = factor;
  }

  report.beta = solve_beta(2.0 / config.distortion).value;
  report.bound = std::pow(static_cast<double>(report.n), 1.0 - report.beta);
  report.jensen_bound = jensen_lower_bound(space, config.distortion);

  report.records.resize(config.trials);
  auto run_trial = [&](std::size_t index) {
    TrialRecord& rec = report.records[index];
    rec.index = index;
    rec.seed = trial_seed(config.seed, index);
    const std::uint64_t schedule_bits = derive_seed(rec.seed, kScheduleStream);
    RadiiSchedule schedule = RadiiSchedule::custom({1.0});
    switch (config.schedule) {
      case ScheduleChoice::optimal:
        schedule = RadiiSchedule::optimal(report.beta, uniform01(schedule_bits));
        break;
      case ScheduleChoice::mn07:
        schedule = RadiiSchedule::mn07_geometric(schedule_bits);
        break;
      case ScheduleChoice::file:
        schedule = *fixed_schedule;
        break;
    }
    auto result = fragment_iterated(space, schedule, config.distortion, rec.seed);
    rec.u = result.u;
    rec.survivors = result.survivors.size();
    rec.levels = result.levels_used;
    if (config.checks) rec.violations = verify_result(space, result);
    if (config.include_runs) rec.run = std::move(result);
  };

  // Results land in fixed slots, so the thread count never changes the report.
  const unsigned threads = std::min<std::size_t>(config.threads ? config.threads : default_threads(), config.trials);
  std::atomic<std::size_t> next{0};
  std::vector<std::string> failures(threads);
  auto worker = [&](unsigned id) {
    try {
      for (std::size_t i = next++; i < config.trials; i = next++) run_trial(i);
    } catch (const std::exception& e) {
      failures[id] = e.what();
      next = config.trials;
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (!f.empty()) throw HarnessError(kExitInput, f);
  }

  double sum = 0.0;
  for (const auto& rec : report.records) {
    report.sizes_sorted.push_back(rec.survivors);
    sum += static_cast<double>(rec.survivors);
    if (config.checks) (rec.violations.empty() ? report.checks_passed : report.checks_failed)++;
  }
  std::sort(report.sizes_sorted.begin(), report.sizes_sorted.end());
  const double count = static_cast<double>(config.trials);
  report.mean = sum / count;
  if (config.trials > 1) {
    double sq = 0.0;
    for (const auto& rec : report.records) {
      const double dev = static_cast<double>(rec.survivors) - report.mean;
      sq += dev * dev;
    }
    report.standard_error = std::sqrt(sq / (count - 1.0) / count);
  }
  report.min = report.sizes_sorted.front();
  report.max = report.sizes_sorted.back();
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

ExperimentReport run(const ExperimentConfig& config) {
  auto report = run_unchecked(config);
  for (const auto& rec : report.records) {
    if (!rec.violations.empty()) {
      throw HarnessError(kExitInvariant, "invariant violation in trial " + std::to_string(rec.index) +
                                             " (seed " + std::to_string(rec.seed) + "): " + rec.violations.front());
    }
  }
  return report;
}

std::string report_to_json(const ExperimentReport& report, bool include_timing) {
  json trials = json::array();
  for (const auto& rec : report.records) {
    json t = {{"index", rec.index},
              {"seed", rec.seed},
              {"u", rec.u ? json(*rec.u) : json(nullptr)},
              {"survivors", rec.survivors},
              {"levels", rec.levels}};
    if (report.checks) t["violations"] = rec.violations;
    if (rec.run) t["run"] = result_json(*rec.run);
    trials.push_back(std::move(t));
  }
  json out = {{"schema", 1},
              {"command", "frag"},
              {"input", report.input},
              {"n", report.n},
              {"D", report.distortion},
              {"trials", report.trials},
              {"seed", report.seed},
              {"schedule", report.schedule},
              {"scale_factor", report.scale_factor},
              {"beta", report.beta},
              {"bound", report.bound},
              {"jensen_lower_bound", report.jensen_bound},
              {"mean", report.mean},
              {"standard_error", report.standard_error},
              {"max", report.max},
              {"min", report.min},
              {"sizes_sorted", report.sizes_sorted},
              {"invariants",
               {{"checked", report.checks}, {"passed", report.checks_passed}, {"failed", report.checks_failed}}},
              {"per_trial", std::move(trials)}};
  if (include_timing) out["wall_clock_seconds"] = report.wall_clock_seconds;
  return out.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "trial,seed,u,survivors,levels,violations,bound,jensen_lower_bound\n";
  for (const auto& rec : report.records) {
    os << rec.index << ',' << rec.seed << ',' << (rec.u ? format_double(*rec.u) : std::string()) << ','
       << rec.survivors << ',' << rec.levels << ',' << rec.violations.size() << ',' << format_double(report.bound)
       << ',' << format_double(report.jensen_bound) << '\n';
  }
  return os.str();
}

std::string result_to_json(const FragmentationResult& result) { return result_json(result).dump(); }

}  // namespace mfrag
