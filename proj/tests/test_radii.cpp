#include <doctest.h>

#include <cmath>
#include <random>

#include "mfrag/errors.hpp"
#include "mfrag/exponents.hpp"
#include "mfrag/radii.hpp"
#include "mfrag/random.hpp"

using namespace mfrag;

namespace {

// Whether r falls in some window (r_n, r_n + 2 r_{n-1} / D], n >= 1.
bool in_window(const RadiiSchedule& s, double D, double r) {
  for (std::size_t n = 1;; ++n) {
    const double rn = s[n];
    const double hi = rn + 2.0 * s[n - 1] / D;
    if (rn < r && r <= hi) return true;
    if (hi < r) return false;  // later windows lie lower still
  }
}

}  // namespace

TEST_CASE("optimal schedule at beta = 1/2") {
  const auto s = RadiiSchedule::optimal(0.5, 0.0);
  CHECK(s[0] == 1.0);
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s[2] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s[3] == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(RadiiSchedule::optimal(0.5, 0.5)[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.kind() == RadiiSchedule::Kind::optimal);
  CHECK(std::string(to_string(s.kind())) == "optimal");
}

TEST_CASE("optimal schedule has a constant ratio") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const double beta = 0.05 + 0.9 * uniform01(rng);
    const double u = uniform01(rng);
    const auto s = RadiiSchedule::optimal(beta, u);
    const double ratio = std::pow(1.0 - beta, 1.0 / beta);
    for (std::size_t n = 1; n < 30; ++n) {
      CHECK(s[n + 1] / s[n] == doctest::Approx(ratio).epsilon(1e-12));
      CHECK(s[n] <= s[n - 1]);
    }
  }
  CHECK_THROWS_AS(RadiiSchedule::optimal(0.0, 0.1), Error);
  CHECK_THROWS_AS(RadiiSchedule::optimal(0.5, 1.0), Error);
}

TEST_CASE("mn07 schedule ranges") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto s = RadiiSchedule::mn07_geometric(seed);
    CHECK(s[0] == 1.0);
    for (std::size_t n = 1; n < 12; ++n) {
      const double scale = std::pow(8.0, -static_cast<double>(n));
      CHECK(s[n] >= scale / 4.0);
      CHECK(s[n] <= scale / 2.0);
      CHECK(s[n] < s[n - 1]);
    }
    CHECK(s[500] > 0.0);
  }
}

TEST_CASE("mn07 first radius has mean 3/64") {
  const int trials = 100'000;
  double sum = 0.0;
  for (int i = 0; i < trials; ++i) sum += RadiiSchedule::mn07_geometric(derive_seed(99, i))[1];
  const double se = (1.0 / 32.0) / std::sqrt(12.0) / std::sqrt(static_cast<double>(trials));
  CHECK(std::abs(sum / trials - 3.0 / 64.0) <= 3.0 * se);
}

TEST_CASE("schedules are pure functions of their parameters") {
  const auto a = RadiiSchedule::mn07_geometric(1234);
  const auto b = RadiiSchedule::mn07_geometric(1234);
  const auto c = RadiiSchedule::optimal(0.61, 0.3);
  const auto d = c;
  for (std::size_t n = 0; n < 200; ++n) {
    CHECK(a[n] == b[n]);
    CHECK(c[n] == d[n]);
  }
  CHECK(a[7] != RadiiSchedule::mn07_geometric(1235)[7]);
}

TEST_CASE("custom schedules") {
  const auto s = RadiiSchedule::custom({1.0, 0.9, 0.5});
  CHECK(s[1] == 0.9);
  CHECK(s[2] == 0.5);
  CHECK(s[100] == 0.5);
  CHECK_THROWS_AS(RadiiSchedule::custom({0.9, 0.5}), Error);
  CHECK_THROWS_AS(RadiiSchedule::custom({1.0, 0.5, 0.7}), Error);
  CHECK_THROWS_AS(RadiiSchedule::custom({1.0, 0.0}), Error);
  CHECK_THROWS_AS(RadiiSchedule::custom({}), Error);
}

TEST_CASE("stopping index") {
  CHECK(stopping_index(RadiiSchedule::optimal(0.5, 0.0), 2.0, 4.0) == 2);
  CHECK(stopping_index(RadiiSchedule::custom({1.0, 0.9}), 2.0, 4.0) == 1);
  try {
    stopping_index(RadiiSchedule::custom({1.0}), 0.5, 4.0);
    FAIL("expected NonTerminating");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonTerminating);
  }
  CHECK_THROWS_AS(stopping_index(RadiiSchedule::custom({1.0}), 0.0, 4.0), Error);
}

TEST_CASE("stopping index grows as d_min shrinks") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = seed % 2 ? RadiiSchedule::mn07_geometric(seed) : RadiiSchedule::optimal(0.6, uniform01(seed));
    std::size_t prev = 0;
    for (double d = 2.0; d > 1e-12; d *= 0.37) {
      const std::size_t N = stopping_index(s, d, 6.0);
      CHECK(N >= prev);
      CHECK(2.0 * s[N] < d);
      CHECK(s[N] + 2.0 * s[N - 1] / 6.0 < d);
      if (N > 1) CHECK_FALSE((2.0 * s[N - 1] < d && s[N - 1] + 2.0 * s[N - 2] / 6.0 < d));
      prev = N;
    }
  }
}

TEST_CASE("window probability matches the interval sum") {
  // Stratified draws of U; the interval sum is exact for r <= 2/D and an
  // upper bound above that.
  const int draws = 20'000;
  for (double D : {2.5, 6.0}) {
    const double beta = solve_beta(2.0 / D).value;
    std::mt19937_64 rng(static_cast<std::uint64_t>(D * 10));
    for (double r : {2.0 / D, 0.7 * 2.0 / D, 0.31 * 2.0 / D, 0.05, 1e-3, 0.9, 1.0, 1.2}) {
      int hits = 0;
      for (int i = 0; i < draws; ++i) {
        const double u = (i + uniform01(rng)) / draws;
        hits += in_window(RadiiSchedule::optimal(beta, u), D, r) ? 1 : 0;
      }
      const double freq = static_cast<double>(hits) / draws;
      const double expected = interval_sum(beta, D, r).total;
      const double se = std::sqrt(std::max(expected * (1.0 - expected), 1e-6) / draws);
      if (r <= 2.0 / D) {
        CHECK(std::abs(freq - expected) <= 3.0 * se);
      } else {
        CHECK(freq <= expected + 3.0 * se);
      }
    }
  }
}

TEST_CASE("telescoping sum along the optimal schedule") {
  const double D = 6.0;
  const double alpha = 2.0 / D;
  const double beta = solve_beta(alpha).value;
  const int draws = 100'000;
  std::mt19937_64 rng(2024);
  for (double p : {0.5, 0.1}) {
    const double lower = beta_p(alpha, p);
    double sum = 0.0, sq = 0.0;
    bool pathwise = true;
    for (int i = 0; i < draws; ++i) {
      const auto s = RadiiSchedule::optimal(beta, uniform01(rng));
      double total = 0.0, tail = 1.0;
      for (std::size_t n = 1; tail > 1e-15; ++n) {
        total += std::pow(s[n] + alpha * s[n - 1], p) - std::pow(s[n], p);
        tail = std::pow(s[n], p);
      }
      pathwise = pathwise && total >= lower * (1.0 - tail) - 1e-12;
      sum += total;
      sq += total * total;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sq / draws - mean * mean) / (draws - 1.0));
    CHECK(pathwise);
    CHECK(mean >= lower - 3.0 * se);
    CHECK(mean <= beta * std::pow(1.0 + alpha, p) + 3.0 * se);
  }
}
