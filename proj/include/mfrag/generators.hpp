#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "mfrag/metric.hpp"

namespace mfrag {

enum class Family { uniform, path, cycle, euclidean, gnp_shortest_path, binary_tree };

struct GeneratorSpec {
  Family family = Family::uniform;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::size_t dim = 2;      // euclidean
  double p = 0.5;           // gnp_shortest_path
  std::size_t depth = 0;    // binary_tree; n = 2^(depth+1) - 1
};

const char* to_string(Family family) noexcept;

/// Parses `family:key=value,...`, e.g. `euclidean:dim=3,n=128,seed=7` or
/// `binary_tree:depth=4`. Keys: n, seed, dim, p, depth. Throws BadSpec.
GeneratorSpec parse_generator_spec(const std::string& text);
std::string format_generator_spec(const GeneratorSpec& spec);

/// Builds and validates the space, normalized to diameter 2 when n >= 2.
/// gnp_shortest_path resamples until connected, throwing Disconnected after
/// 100 attempts.
FiniteMetricSpace generate(const GeneratorSpec& spec);

}  // namespace mfrag
