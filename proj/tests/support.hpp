// Small helpers shared by the unit tests.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mfrag/generators.hpp"
#include "mfrag/metric.hpp"
#include "mfrag/random.hpp"

namespace testing {

inline mfrag::FiniteMetricSpace path3() {
  return mfrag::make_space({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
}

inline mfrag::FiniteMetricSpace uniform(std::size_t n, double value) {
  mfrag::Matrix m(n, std::vector<double>(n, value));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
  return mfrag::make_space(m);
}

// A normalized space from a rotating set of families, sized n.
inline mfrag::FiniteMetricSpace mixed_space(std::size_t n, std::uint64_t seed) {
  mfrag::GeneratorSpec spec;
  spec.n = n;
  spec.seed = seed;
  switch (seed % 4) {
    case 0: spec.family = mfrag::Family::euclidean; spec.dim = 2; break;
    case 1: spec.family = mfrag::Family::euclidean; spec.dim = 5; break;
    case 2: spec.family = mfrag::Family::gnp_shortest_path; spec.p = 0.4; break;
    default: spec.family = mfrag::Family::cycle; break;
  }
  return mfrag::generate(spec);
}

// Random hierarchy on k points: each point gets a random digit string and the
// level of a pair is the length of their common prefix.
struct RandomHierarchy {
  std::vector<std::vector<std::size_t>> levels;
  std::vector<double> scales;
};

inline RandomHierarchy random_hierarchy(std::size_t k, std::size_t depth, std::mt19937_64& rng) {
  std::vector<std::vector<int>> code(k, std::vector<int>(depth));
  for (auto& c : code) {
    for (auto& digit : c) digit = static_cast<int>(mfrag::uniform_index(rng, 2));
  }
  RandomHierarchy h;
  h.levels.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      std::size_t l = 0;
      while (l < depth && code[a][l] == code[b][l]) ++l;
      h.levels[a][b] = std::min(l, depth - 1);
    }
  }
  double s = 1.0;
  for (std::size_t l = 0; l < depth; ++l) {
    h.scales.push_back(s);
    s *= 0.2 + 0.7 * mfrag::uniform01(rng);
  }
  return h;
}

}  // namespace testing
