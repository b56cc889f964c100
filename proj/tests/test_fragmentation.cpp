#include <doctest.h>

#include <cmath>
#include <random>

#include "mfrag/errors.hpp"
#include "mfrag/exponents.hpp"
#include "mfrag/fragmentation.hpp"
#include "mfrag/harness.hpp"
#include "mfrag/random.hpp"
#include "support.hpp"

using namespace mfrag;

namespace {

std::vector<Point> all_points(const FiniteMetricSpace& s) {
  std::vector<Point> v(s.size());
  for (Point x = 0; x < s.size(); ++x) v[x] = x;
  return v;
}

}  // namespace

TEST_CASE("uniform space keeps only the first sample") {
  const auto s = testing::uniform(8, 2.0);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto level = fragment_once(s, all_points(s), 1.0, 2.0, rng);
    CHECK(level.samples_drawn == 1);
    REQUIRE(level.centers.size() == 1);
    const Point first = level.centers.at(1);
    for (Point x = 0; x < s.size(); ++x) CHECK(level.cluster_of[x] == (x == first ? 1 : kNoCluster));
  }
}

TEST_CASE("a point whose two balls agree always survives") {
  const auto s = make_space({{0, 2}, {2, 0}});
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto level = fragment_once(s, {0}, 0.5, 1.0, rng);
    CHECK(level.cluster_of[0] != kNoCluster);
    CHECK(level.cluster_of[1] == kNoCluster);
    CHECK(level.centers.at(level.cluster_of[0]) == 0);
  }
}

TEST_CASE("fragment_once argument checks") {
  const auto s = testing::path3();
  std::mt19937_64 rng(3);
  CHECK_THROWS_AS(fragment_once(s, {0}, 1.0, 1.0, rng), Error);
  CHECK_THROWS_AS(fragment_once(s, {0}, 0.0, 1.0, rng), Error);
  CHECK_THROWS_AS(fragment_once(s, {7}, 0.5, 1.0, rng), Error);
  CHECK(fragment_once(s, {}, 0.5, 1.0, rng).samples_drawn == 0);
}

TEST_CASE("survival frequency follows the ball ratio") {
  const int trials = 100'000;
  struct Case {
    FiniteMetricSpace space;
    Point x;
    double r, R;
  };
  const Case cases[] = {
      {make_space({{0, 2}, {2, 0}}), 0, 1.0, 2.0},
      {testing::mixed_space(12, 4), 3, 0.4, 0.9},
      {testing::mixed_space(20, 2), 11, 0.5, 1.5},
  };
  for (const auto& c : cases) {
    const double p = static_cast<double>(ball_size(c.space, c.x, c.r)) / ball_size(c.space, c.x, c.R);
    std::mt19937_64 rng(derive_seed(77, c.x));
    const auto active = all_points(c.space);
    int survived = 0;
    for (int t = 0; t < trials; ++t) {
      survived += fragment_once(c.space, active, c.r, c.R, rng).cluster_of[c.x] != kNoCluster ? 1 : 0;
    }
    const double se = std::sqrt(p * (1.0 - p) / trials);
    CHECK(std::abs(static_cast<double>(survived) / trials - p) <= 3.0 * se);
  }
}

TEST_CASE("clusters of one step are tight and separated") {
  std::mt19937_64 rng(4);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto s = testing::mixed_space(10 + seed % 30, seed);
    const double r = 0.1 + uniform01(rng);
    const double R = r + 0.05 + uniform01(rng);
    const auto level = fragment_once(s, all_points(s), r, R, rng);
    for (Point x = 0; x < s.size(); ++x) {
      const ClusterId a = level.cluster_of[x];
      if (a == kNoCluster) continue;
      CHECK(s(level.centers.at(a), x) <= r);
      for (Point y = 0; y < s.size(); ++y) {
        const ClusterId b = level.cluster_of[y];
        if (b != kNoCluster && b != a) CHECK(s(x, y) > R - r);
      }
    }
  }
}

TEST_CASE("single point") {
  const auto s = make_space({{0.0}});
  const auto result = fragment_iterated(s, RadiiSchedule::optimal(0.6, 0.2), 4.0, 9);
  CHECK(result.levels_used == 1);
  CHECK(result.survivors == std::vector<Point>{0});
  CHECK(verify_result(s, result).empty());
  CHECK(expected_mass_bound(s, RadiiSchedule::optimal(0.6, 0.2), 4.0) == 1.0);
  CHECK(jensen_lower_bound(s, 4.0) == 1.0);
}

TEST_CASE("two points with a short custom schedule") {
  const auto s = make_space({{0, 2}, {2, 0}});
  const auto schedule = RadiiSchedule::custom({1.0, 0.9});
  const auto result = fragment_iterated(s, schedule, 4.0, 5);
  CHECK(result.levels_used == 1);
  CHECK(result.survivors == std::vector<Point>{0, 1});
  CHECK(result.levels[0].cluster_of[0] != result.levels[0].cluster_of[1]);
  const auto tree = ultrametric_of(result);
  CHECK(tree.level(0, 1) == 0);
  CHECK(tree.value(0, 1) == 2.0);
  CHECK(distortion(s, tree) == 1.0);
  CHECK(verify_result(s, result).empty());
  CHECK(expected_mass_bound(s, schedule, 4.0) == 2.0);
}

TEST_CASE("normalized uniform space never loses a point") {
  // R_m = r_m + 2 r_{m-1} / D < 2 for every level, so no ball reaches another point.
  const auto s = testing::uniform(8, 2.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto schedule = RadiiSchedule::optimal(solve_beta(0.5).value, uniform01(seed));
    CHECK(fragment_iterated(s, schedule, 4.0, seed).survivors.size() == 8);
    CHECK(expected_mass_bound(s, schedule, 4.0) == 8.0);
  }
}

TEST_CASE("uniform space with an effective level keeps one point") {
  // distances 1: level 1 has r = 0.6 < 1 <= 0.6 + 2/4
  const auto s = testing::uniform(6, 1.0);
  const auto schedule = RadiiSchedule::custom({1.0, 0.6, 0.1});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto result = fragment_iterated(s, schedule, 4.0, seed);
    CHECK(result.survivors.size() == 1);
    CHECK(verify_result(s, result).empty());
  }
  CHECK(expected_mass_bound(s, schedule, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mean survivor count equals the mass bound for a fixed schedule") {
  const auto s = testing::mixed_space(24, 8);
  const double D = 4.0;
  const auto schedule = RadiiSchedule::optimal(solve_beta(2.0 / D).value, 0.37);
  const double expected = expected_mass_bound(s, schedule, D);
  const int trials = 20'000;
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double k = static_cast<double>(fragment_iterated(s, schedule, D, derive_seed(3, t)).survivors.size());
    sum += k;
    sq += k * k;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sq / trials - mean * mean) / (trials - 1.0));
  CHECK(std::abs(mean - expected) <= 3.0 * se);
}

TEST_CASE("jensen bound sits between n^(1-beta) and n") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto s = testing::mixed_space(5 + seed % 40, seed);
    for (double D : {2.2, 4.0, 9.0}) {
      const double beta = solve_beta(2.0 / D).value;
      const double bound = jensen_lower_bound(s, D);
      CHECK(bound >= std::pow(static_cast<double>(s.size()), 1.0 - beta) * (1.0 - 1e-12));
      CHECK(bound <= s.size() * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("runs are sound across families, schedules and distortions") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto s = testing::mixed_space(2 + seed % 40, seed);
    const double D = seed % 3 == 0 ? 2.1 : seed % 3 == 1 ? 3.5 : 12.0;
    const auto schedule = seed % 2 ? RadiiSchedule::mn07_geometric(seed)
                                   : RadiiSchedule::optimal(solve_beta(2.0 / D).value, uniform01(seed));
    const auto result = fragment_iterated(s, schedule, D, derive_seed(seed, 1));
    const auto problems = verify_result(s, result);
    CHECK_MESSAGE(problems.empty(), (problems.empty() ? "" : problems.front()));
    ++checked;
  }
  CHECK(checked == 150);
}

TEST_CASE("identical inputs give identical runs") {
  const auto s = testing::mixed_space(30, 5);
  const auto schedule = RadiiSchedule::optimal(0.7, 0.25);
  const auto a = fragment_iterated(s, schedule, 3.0, 42);
  const auto b = fragment_iterated(s, schedule, 3.0, 42);
  CHECK(result_to_json(a) == result_to_json(b));
  CHECK(result_to_json(a) != result_to_json(fragment_iterated(s, schedule, 3.0, 43)));
}

TEST_CASE("verification catches a tampered run") {
  const auto s = testing::mixed_space(20, 1);
  auto result = fragment_iterated(s, RadiiSchedule::optimal(0.7, 0.5), 3.0, 11);
  REQUIRE(result.survivors.size() >= 2);
  CHECK(verify_result(s, result).empty());

  auto merged = result;
  auto& last = merged.levels.back();
  last.cluster_of[merged.survivors[1]] = last.cluster_of[merged.survivors[0]];
  CHECK_FALSE(verify_result(s, merged).empty());

  auto dropped = result;
  dropped.survivors.pop_back();
  CHECK_FALSE(verify_result(s, dropped).empty());
}

TEST_CASE("fragmentation domain") {
  const auto big = testing::uniform(3, 3.0);
  try {
    fragment_iterated(big, RadiiSchedule::optimal(0.6, 0.1), 4.0, 1);
    FAIL("expected NotNormalized");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotNormalized);
  }
  CHECK_THROWS_AS(fragment_iterated(testing::path3(), RadiiSchedule::optimal(0.6, 0.1), 2.0, 1), Error);
}
