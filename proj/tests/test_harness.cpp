#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mfrag/exponents.hpp"
#include "mfrag/harness.hpp"
#include "mfrag/io.hpp"
#include "support.hpp"

using namespace mfrag;
using nlohmann::json;

namespace {

ExperimentConfig base(const std::string& generator, double D, std::size_t trials) {
  ExperimentConfig c;
  c.generator = generator;
  c.distortion = D;
  c.trials = trials;
  c.seed = 1;
  c.threads = 1;
  return c;
}

int exit_code_of(const ExperimentConfig& c) {
  try {
    run(c);
  } catch (const HarnessError& e) {
    return e.exit_code();
  }
  return 0;
}

}  // namespace

TEST_CASE("trial seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 10000; ++i) seen.insert(trial_seed(1, i));
  CHECK(seen.size() == 10000);
  CHECK(trial_seed(5, 17) == trial_seed(5, 17));
  CHECK(trial_seed(5, 17) != trial_seed(6, 17));
}

TEST_CASE("uniform space keeps every point") {
  const auto report = run(base("uniform:n=8", 4.0, 1000));
  CHECK(report.n == 8);
  CHECK(report.mean == 8.0);
  CHECK(report.min == 8);
  CHECK(report.standard_error == 0.0);
  CHECK(report.bound == doctest::Approx(std::pow(8.0, 1.0 - solve_beta(0.5).value)).epsilon(1e-12));
}

TEST_CASE("report statistics") {
  auto c = base("euclidean:n=48,dim=2,seed=3", 3.0, 400);
  c.checks = true;
  const auto r = run(c);
  CHECK(r.checks_passed == 400);
  CHECK(r.checks_failed == 0);
  CHECK(r.bound == std::pow(48.0, 1.0 - r.beta));
  CHECK(r.beta == solve_beta(2.0 / 3.0).value);
  CHECK(r.sizes_sorted.size() == 400);
  CHECK(std::is_sorted(r.sizes_sorted.begin(), r.sizes_sorted.end()));
  CHECK(r.min == r.sizes_sorted.front());
  CHECK(r.max == r.sizes_sorted.back());
  double sum = 0.0;
  for (const auto& rec : r.records) {
    sum += static_cast<double>(rec.survivors);
    CHECK(rec.u.has_value());
    CHECK(rec.seed == trial_seed(1, rec.index));
  }
  CHECK(r.mean == doctest::Approx(sum / 400.0).epsilon(1e-15));
  CHECK(r.mean >= r.jensen_bound - 3.0 * r.standard_error);
  CHECK(r.jensen_bound >= r.bound);
}

TEST_CASE("json report shape") {
  auto c = base("path:n=6", 5.0, 3);
  c.include_runs = true;
  const auto j = json::parse(report_to_json(run(c)));
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "frag");
  CHECK(j["input"] == "path:n=6");
  CHECK(j["n"] == 6);
  CHECK(j["schedule"] == "optimal");
  CHECK(j["per_trial"].size() == 3);
  CHECK(j.contains("wall_clock_seconds"));
  const auto& run0 = j["per_trial"][0]["run"];
  CHECK(run0["n"] == 6);
  CHECK(run0["scales"][0] == 1.0);
  CHECK(run0["levels"].size() + 1 == run0["scales"].size());
  const auto k = run0["survivors"].size();
  CHECK(run0["ultrametric_pairs"].size() == k * (k - 1) / 2);
  CHECK_FALSE(json::parse(report_to_json(run(c), false)).contains("wall_clock_seconds"));
}

TEST_CASE("reports do not depend on the thread count") {
  auto c = base("euclidean:n=40,dim=3,seed=2", 4.0, 64);
  c.include_runs = true;
  c.schedule = ScheduleChoice::mn07;
  const auto one = report_to_json(run(c), false);
  c.threads = 4;
  CHECK(report_to_json(run(c), false) == one);
  c.seed = 2;
  CHECK(report_to_json(run(c), false) != one);
}

TEST_CASE("csv report") {
  const auto r = run(base("cycle:n=10", 3.0, 5));
  std::istringstream in(report_to_csv(r));
  std::string line;
  std::getline(in, line);
  CHECK(line == "trial,seed,u,survivors,levels,violations,bound,jensen_lower_bound");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(line.rfind(std::to_string(rows) + "," + std::to_string(trial_seed(1, rows)) + ",", 0) == 0);
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("input files and schedule files") {
  const std::string matrix = "test_harness_matrix.csv";
  const std::string sched = "test_harness_schedule.txt";
  {
    std::ofstream(matrix) << "3\n0,1,2\n1,0,1\n2,1,0\n";
    std::ofstream(sched) << "1\n0.6\n0.2\n";
  }
  ExperimentConfig c;
  c.input_path = matrix;
  c.distortion = 4.0;
  c.trials = 20;
  c.schedule = ScheduleChoice::file;
  c.schedule_path = sched;
  c.checks = true;
  const auto r = run(c);
  CHECK(r.schedule == "file");
  CHECK(r.scale_factor == 1.0);
  CHECK_FALSE(r.records[0].u.has_value());
  std::remove(matrix.c_str());
  std::remove(sched.c_str());
}

TEST_CASE("configuration and input errors") {
  CHECK(exit_code_of(base("uniform:n=4", 2.0, 1)) == kExitConfig);
  CHECK(exit_code_of(base("uniform:n=4", NAN, 1)) == kExitConfig);
  CHECK(exit_code_of(base("uniform:n=4", 4.0, 0)) == kExitConfig);
  CHECK(exit_code_of(base("sphere:n=4", 4.0, 1)) == kExitConfig);
  CHECK(exit_code_of(base("", 4.0, 1)) == kExitConfig);
  CHECK(exit_code_of(base("gnp:n=60,p=0.0001", 4.0, 1)) == kExitInput);

  ExperimentConfig missing;
  missing.input_path = "does/not/exist.csv";
  missing.distortion = 4.0;
  CHECK(exit_code_of(missing) == kExitInput);

  ExperimentConfig both = base("uniform:n=4", 4.0, 1);
  both.input_path = "x.csv";
  CHECK(exit_code_of(both) == kExitConfig);

  ExperimentConfig no_path = base("uniform:n=4", 4.0, 1);
  no_path.schedule = ScheduleChoice::file;
  CHECK(exit_code_of(no_path) == kExitConfig);
}
