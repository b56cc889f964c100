#include "mfrag/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "mfrag/exponents.hpp"
#include "mfrag/fragmentation.hpp"
#include "mfrag/generators.hpp"
#include "mfrag/harness.hpp"
#include "mfrag/oracle.hpp"
#include "mfrag/random.hpp"

namespace mfrag::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

CriterionResult timed(int id, std::string name, double limit, const std::function<bool(std::ostream&)>& body) {
  CriterionResult out;
  out.id = id;
  out.name = std::move(name);
  out.limit_seconds = limit;
  std::ostringstream detail;
  detail.precision(6);
  const auto start = Clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << " exception: " << e.what();
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (out.seconds >= limit) {
    detail << " runtime " << out.seconds << " s over budget " << limit << " s";
    ok = false;
  }
  out.passed = ok;
  out.detail = detail.str();
  return out;
}

// Spaces cycling through every generator family with n <= max_n.
GeneratorSpec family_spec(std::size_t index, std::size_t max_n, std::mt19937_64& rng) {
  GeneratorSpec spec;
  spec.seed = rng();
  auto pick_n = [&](std::size_t lo) { return lo + uniform_index(rng, max_n - lo + 1); };
  switch (index % 6) {
    case 0:
      spec.family = Family::uniform;
      spec.n = pick_n(1);
      break;
    case 1:
      spec.family = Family::path;
      spec.n = pick_n(2);
      break;
    case 2:
      spec.family = Family::cycle;
      spec.n = pick_n(3);
      break;
    case 3:
      spec.family = Family::euclidean;
      spec.n = pick_n(2);
      spec.dim = 1 + uniform_index(rng, 3);
      break;
    case 4: {
      spec.family = Family::gnp_shortest_path;
      spec.n = pick_n(2);
      const double n = static_cast<double>(spec.n);
      spec.p = std::min(1.0, 3.0 * std::log(n + 1.0) / n);
      break;
    }
    default: {
      spec.family = Family::binary_tree;
      std::size_t depth_cap = 0;
      while ((std::size_t{4} << depth_cap) - 1 <= max_n) ++depth_cap;
      spec.depth = uniform_index(rng, depth_cap + 1);
      spec.n = (std::size_t{2} << spec.depth) - 1;
      break;
    }
  }
  return spec;
}

RadiiSchedule schedule_for(std::size_t run, double distortion, std::uint64_t seed) {
  if (run % 3 == 2) return RadiiSchedule::mn07_geometric(derive_seed(seed, 0));
  return RadiiSchedule::optimal(solve_beta(2.0 / distortion).value, uniform01(derive_seed(seed, 0)));
}

const ExperimentReport& euclidean_experiment() {
  static const ExperimentReport report = [] {
    ExperimentConfig config;
    config.generator = "euclidean:dim=3,n=128,seed=7";
    config.distortion = 6.0;
    config.trials = 2000;
    config.seed = 20240601;
    return run(config);
  }();
  return report;
}

}  // namespace

CriterionResult survival_law() {
  return timed(1, "exact survival law", 5.0, [](std::ostream& os) {
    const auto space = generate(parse_generator_spec("uniform:n=8"));
    constexpr std::size_t kRuns = 100'000;
    std::vector<Point> all(8);
    for (Point x = 0; x < 8; ++x) all[x] = x;
    std::vector<std::size_t> kept(8, 0);
    for (std::size_t run = 0; run < kRuns; ++run) {
      std::mt19937_64 rng(derive_seed(0xA11CE, run));
      const auto level = fragment_once(space, all, 1.0, 2.0, rng);
      for (Point x = 0; x < 8; ++x) kept[x] += level.cluster_of[x] != kNoCluster;
    }
    const double p = 1.0 / 8.0;
    const double se = std::sqrt(p * (1.0 - p) / kRuns);
    bool ok = true;
    double worst = 0.0;
    for (Point x = 0; x < 8; ++x) {
      const double freq = static_cast<double>(kept[x]) / kRuns;
      worst = std::max(worst, std::abs(freq - p));
      ok = ok && std::abs(freq - p) <= 3.0 * se;
    }
    os << "max |freq - 1/8| = " << worst << " vs 3SE = " << 3.0 * se;
    return ok;
  });
}

CriterionResult structural_invariants() {
  return timed(2, "structural invariants", 60.0, [](std::ostream& os) {
    constexpr std::size_t kRuns = 1000;
    const double distortions[] = {2.5, 4.0, 8.0};
    std::mt19937_64 rng(0x57A7E);
    std::size_t failures = 0;
    std::string first;
    std::size_t survivors = 0;
    for (std::size_t run = 0; run < kRuns; ++run) {
      const auto spec = family_spec(run, 64, rng);
      const double D = distortions[(run / 6) % 3];
      const auto space = generate(spec);
      const std::uint64_t seed = rng();
      const auto result = fragment_iterated(space, schedule_for(run, D, seed), D, seed);
      survivors += result.survivors.size();
      const auto problems = verify_result(space, result);
      if (!problems.empty()) {
        if (failures == 0) first = format_generator_spec(spec) + " seed " + std::to_string(seed) + ": " + problems[0];
        ++failures;
      }
    }
    os << kRuns << " runs, " << survivors << " survivors total, " << failures << " failing runs";
    if (!first.empty()) os << "; first: " << first;
    return failures == 0;
  });
}

CriterionResult expectation_chain() {
  return timed(3, "expectation chain", 120.0, [](std::ostream& os) {
    const auto& report = euclidean_experiment();
    const double beta = solve_beta(1.0 / 3.0).value;
    const double bound = std::pow(128.0, 1.0 - beta);
    const bool jensen_ok = report.jensen_bound >= bound - 1e-9;
    const bool mean_ok = report.mean >= report.jensen_bound - 3.0 * report.standard_error;
    os << "mean " << report.mean << " (SE " << report.standard_error << "), jensen " << report.jensen_bound
       << ", 128^(1-beta) " << bound;
    return jensen_ok && mean_ok;
  });
}

CriterionResult existence_at_bound() {
  return timed(4, "existence at guaranteed size", 120.0, [](std::ostream& os) {
    const auto& report = euclidean_experiment();
    const double needed = std::ceil(std::pow(128.0, 1.0 - solve_beta(1.0 / 3.0).value));
    os << "max survivors " << report.max << " over " << report.trials << " trials, need " << needed;
    return needed == 7.0 && static_cast<double>(report.max) >= needed;
  });
}

CriterionResult admissible_supremum() {
  return timed(5, "admissible-exponent supremum", 60.0, [](std::ostream& os) {
    constexpr std::size_t kDraws = 100'000;
    constexpr std::size_t kProbes = 1000;
    bool ok = true;
    for (const double D : {2.1, 3.0, 6.0, 20.0}) {
      const double alpha = 2.0 / D;
      const double beta = solve_beta(alpha).value;
      const double sup = sup_interval_sum(beta, D, 10'000);
      const bool sup_ok = std::abs(sup - beta) <= 1e-9;

      // Probes span two periods of a below r = 2/D, where r_0 = 1 does not cut
      // the first window and the interval sum is the exact probability.
      const double log_hi = std::log(alpha);
      const double log_lo = log_hi + 2.0 * std::log1p(-beta) / beta;
      std::vector<double> probes(kProbes);
      for (std::size_t k = 0; k < kProbes; ++k) {
        probes[k] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) / (kProbes - 1));
      }
      std::vector<std::size_t> hits(kProbes, 0);
      std::mt19937_64 rng(derive_seed(0x5C4E5, static_cast<std::uint64_t>(D * 1000)));
      std::vector<double> radii;
      for (std::size_t i = 0; i < kDraws; ++i) {
        // Stratified: one uniform draw in each cell [i/N, (i+1)/N).
        const double u = (static_cast<double>(i) + uniform01(rng)) / kDraws;
        const auto schedule = RadiiSchedule::optimal(beta, u);
        radii.assign(1, 1.0);
        for (std::size_t n = 1; radii.back() * (1.0 + alpha) >= probes.front(); ++n) radii.push_back(schedule[n]);
        for (std::size_t k = 0; k < kProbes; ++k) {
          const double r = probes[k];
          for (std::size_t n = 1; n < radii.size(); ++n) {
            if (radii[n] < r && r <= radii[n] + alpha * radii[n - 1]) ++hits[k];
          }
        }
      }
      std::size_t mismatched = 0;
      std::size_t above = 0;
      double worst = 0.0;
      const double se_beta = std::sqrt(beta * (1.0 - beta) / kDraws);
      for (std::size_t k = 0; k < kProbes; ++k) {
        const double expected = interval_sum(beta, D, probes[k]).total;
        const double se = std::sqrt(expected * (1.0 - expected) / kDraws);
        const double freq = static_cast<double>(hits[k]) / kDraws;
        worst = std::max(worst, std::abs(freq - expected));
        if (std::abs(freq - expected) > 3.0 * se) ++mismatched;
        if (freq > beta + 3.0 * se_beta) ++above;
      }
      os << "D=" << D << ": |sup-beta|=" << std::abs(sup - beta) << ", MC worst " << worst << ", mismatches "
         << mismatched << ", above beta " << above << "; ";
      ok = ok && sup_ok && mismatched == 0 && above == 0;
    }
    return ok;
  });
}

CriterionResult exponent_identities() {
  return timed(6, "exponent identities", 1.0, [](std::ostream& os) {
    bool ok = true;
    for (const double D : {2.01, 2.1, 3.0, 6.0, 10.0, 100.0}) {
      const double theta = solve_theta(D).value;
      const double beta = solve_beta(2.0 / D).value;
      const bool sum_ok = std::abs(theta + beta - 1.0) <= 1e-11;
      const bool lower_ok = theta >= 1.0 - 2.0 * std::numbers::e / D;
      if (!sum_ok || !lower_ok) os << "D=" << D << " theta+beta-1=" << theta + beta - 1.0 << "; ";
      ok = ok && sum_ok && lower_ok;
    }
    const double eps = 1e-6;
    const double ratio = solve_theta(2.0 + eps).value * 2.0 * std::log(1.0 / eps) / eps;
    const bool asymptotic_ok = ratio >= 0.8 && ratio <= 1.25;
    os << "theta(2+eps) 2 log(1/eps)/eps = " << ratio << " at eps=1e-6 (required [0.8, 1.25])";
    return ok && asymptotic_ok;
  });
}

CriterionResult beta_p_limit() {
  return timed(7, "beta_p limit", 5.0, [](std::ostream& os) {
    bool ok = true;
    for (const double alpha : {0.1, 1.0 / 3.0, 0.8}) {
      const double beta = solve_beta(alpha).value;
      double previous = std::numeric_limits<double>::infinity();
      os << "alpha=" << alpha << ":";
      for (const double p : {0.1, 0.01, 0.001}) {
        const auto m = beta_p_minimum(alpha, p);
        const double error = std::abs(m.value - beta);
        const double critical = beta_p_critical_point(alpha, p, m.value);
        const double rel = std::abs(m.minimizer - critical) / critical;
        os << " p=" << p << " err " << error << " x0 rel " << rel << ";";
        ok = ok && error < previous && rel <= 1e-6;
        previous = error;
      }
      ok = ok && previous <= 0.05;
    }
    return ok;
  });
}

CriterionResult oracle_equivalence() {
  return timed(8, "oracle equivalence", 120.0, [](std::ostream& os) {
    constexpr std::size_t kSpaces = 200;
    constexpr std::size_t kRunsPerSpace = 5;
    std::mt19937_64 rng(0x0AC1E);
    std::size_t failures = 0;
    std::size_t runs = 0;
    std::string first;
    for (std::size_t i = 0; i < kSpaces; ++i) {
      const auto spec = family_spec(i, 8, rng);
      const double D = i % 2 == 0 ? 2.5 : 4.0;
      const auto space = generate(spec);
      const auto best = max_subset(space, D);
      auto fail = [&](const std::string& why) {
        if (failures++ == 0) first = format_generator_spec(spec) + ": " + why;
      };
      if (spec.family == Family::uniform && best.size != spec.n) fail("max_subset below n on a uniform metric");
      for (std::size_t k = 0; k < kRunsPerSpace; ++k, ++runs) {
        const std::uint64_t seed = rng();
        const auto result = fragment_iterated(space, schedule_for(k, D, seed), D, seed);
        if (!embeddable(space, result.survivors, D)) fail("survivors not embeddable");
        if (result.survivors.size() > best.size) fail("survivors exceed max_subset");
      }
    }
    os << kSpaces << " spaces, " << runs << " runs, " << failures << " failures";
    if (!first.empty()) os << "; first: " << first;
    return failures == 0;
  });
}

CriterionResult determinism() {
  return timed(9, "determinism", 10.0, [](std::ostream& os) {
    ExperimentConfig config;
    config.generator = "euclidean:dim=2,n=48,seed=11";
    config.distortion = 4.0;
    config.trials = 100;
    config.seed = 42;
    config.checks = true;
    config.include_runs = true;
    config.threads = 1;
    const auto first = report_to_json(run(config), false);
    config.threads = 4;
    const auto second = report_to_json(run(config), false);
    os << "two reports of " << first.size() << " bytes " << (first == second ? "identical" : "differ");
    return first == second;
  });
}

std::vector<CriterionResult> run_all() {
  return {survival_law(),       structural_invariants(), expectation_chain(),
          existence_at_bound(), admissible_supremum(),   exponent_identities(),
          beta_p_limit(),       oracle_equivalence(),    determinism()};
}

std::string format_line(const CriterionResult& result) {
  std::ostringstream os;
  os.precision(3);
  os << (result.passed ? "[PASS] " : "[FAIL] ") << result.id << ' ' << result.name << " (" << result.seconds
     << " s): " << result.detail;
  return os.str();
}

}  // namespace mfrag::acceptance
