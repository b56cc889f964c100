#include "mfrag/fragmentation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfrag/errors.hpp"
#include "mfrag/exponents.hpp"
#include "mfrag/random.hpp"

namespace mfrag {

namespace {

constexpr std::uint64_t kSampleCap = 10'000'000;
constexpr double kRelativeSlack = 1e-12;

void require_fragmentation_domain(const FiniteMetricSpace& space, double distortion) {
  if (!(distortion > 2.0) || !std::isfinite(distortion)) {
    throw Error(Errc::DomainError, "distortion must be a finite value above 2");
  }
  if (space.diameter() > 2.0 * (1.0 + kRelativeSlack)) {
    throw Error(Errc::NotNormalized, "diameter exceeds 2; normalize the space first");
  }
}

double enlarged_radius(const RadiiSchedule& schedule, std::size_t m, double distortion) {
  return schedule[m] + 2.0 * schedule[m - 1] / distortion;
}

}  // namespace

FragmentLevel fragment_once(const FiniteMetricSpace& space, const std::vector<Point>& active, double r,
                            double R, std::mt19937_64& rng) {
  if (!(r > 0.0 && r < R)) throw Error(Errc::DomainError, "scales must satisfy 0 < r < R");
  const std::size_t n = space.size();
  FragmentLevel level;
  level.cluster_of.assign(n, kNoCluster);

  std::vector<Point> pending;
  pending.reserve(active.size());
  std::vector<bool> seen(n, false);
  for (Point x : active) {
    if (x >= n) throw Error(Errc::DomainError, "active point outside the space");
    if (!seen[x]) pending.push_back(x);
    seen[x] = true;
  }

  std::uint64_t index = 0;
  while (!pending.empty()) {
    if (index >= kSampleCap) throw Error(Errc::SampleCap, "assignment incomplete after 10^7 samples");
    ++index;
    const Point sample = uniform_index(rng, n);
    const auto from_sample = space.row(sample);
    for (std::size_t i = 0; i < pending.size();) {
      const Point x = pending[i];
      const double d = from_sample[x];
      if (d > R) {
        ++i;
        continue;
      }
      if (d <= r) {
        level.cluster_of[x] = static_cast<ClusterId>(index);
        level.centers.emplace(static_cast<ClusterId>(index), sample);
      }
      pending[i] = pending.back();
      pending.pop_back();
    }
  }
  level.samples_drawn = index;
  return level;
}

FragmentationResult fragment_iterated(const FiniteMetricSpace& space, const RadiiSchedule& schedule,
                                      double distortion, std::uint64_t seed) {
  require_fragmentation_domain(space, distortion);

  FragmentationResult result;
  result.n = space.size();
  result.distortion = distortion;
  result.schedule = schedule;
  result.seed = seed;
  if (schedule.kind() == RadiiSchedule::Kind::optimal) result.u = schedule.u();

  // Past N every ball B(x, R_m) is {x}: each point is its own cluster and
  // survives with probability 1, so the remaining steps are identities.
  const std::size_t levels = stopping_index(schedule, space.min_distance(), distortion);
  result.levels_used = levels;
  for (std::size_t m = 0; m <= levels; ++m) result.scales.push_back(schedule[m]);

  std::vector<Point> active(space.size());
  for (Point x = 0; x < space.size(); ++x) active[x] = x;

  for (std::size_t m = 1; m <= levels; ++m) {
    std::mt19937_64 rng(derive_seed(seed, m));
    auto level = fragment_once(space, active, schedule[m], enlarged_radius(schedule, m, distortion), rng);
    active.clear();
    for (Point x = 0; x < space.size(); ++x) {
      if (level.cluster_of[x] != kNoCluster) active.push_back(x);
    }
    result.levels.push_back(std::move(level));
  }
  result.survivors = std::move(active);
  return result;
}

UltrametricTree ultrametric_of(const FragmentationResult& result) {
  const auto& pts = result.survivors;
  const std::size_t k = pts.size();
  std::vector<std::vector<std::size_t>> levels(k, std::vector<std::size_t>(k, 0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      std::size_t shared = 0;
      while (shared < result.levels.size() &&
             result.levels[shared].cluster_of[pts[a]] == result.levels[shared].cluster_of[pts[b]]) {
        ++shared;
      }
      levels[a][b] = levels[b][a] = shared;
    }
  }
  return UltrametricTree::make(pts, std::move(levels), result.scales);
}

std::vector<std::string> verify_result(const FiniteMetricSpace& space, const FragmentationResult& result) {
  std::vector<std::string> problems;
  auto report = [&](auto&&... parts) {
    std::ostringstream os;
    os.precision(17);
    (os << ... << parts);
    problems.push_back(os.str());
  };

  const std::size_t n = space.size();
  const std::size_t levels = result.levels_used;
  if (result.levels.size() != levels || result.scales.size() != levels + 1) {
    report("level count mismatch: N = ", levels, ", levels = ", result.levels.size(),
           ", scales = ", result.scales.size());
    return problems;
  }

  for (std::size_t m = 1; m <= levels; ++m) {
    const auto& level = result.levels[m - 1];
    const double r = result.scales[m];
    const double separation = 2.0 * result.scales[m - 1] / result.distortion;
    if (level.cluster_of.size() != n) {
      report("level ", m, ": assignment covers ", level.cluster_of.size(), " points");
      continue;
    }
    std::map<ClusterId, std::size_t> cluster_sizes;
    for (Point x = 0; x < n; ++x) {
      const ClusterId id = level.cluster_of[x];
      if (id == kNoCluster) continue;
      ++cluster_sizes[id];
      if (m > 1 && result.levels[m - 2].cluster_of[x] == kNoCluster) {
        report("level ", m, ": point ", x, " present without surviving level ", m - 1);
      }
      const auto center = level.centers.find(id);
      if (center == level.centers.end()) {
        report("level ", m, ": cluster ", id, " has no recorded center");
      } else if (space(center->second, x) > r) {
        report("level ", m, ": point ", x, " lies outside B(center, ", r, ")");
      }
      for (Point y = x + 1; y < n; ++y) {
        const ClusterId other = level.cluster_of[y];
        if (other == kNoCluster) continue;
        if (other == id && space(x, y) > 2.0 * r * (1.0 + kRelativeSlack)) {
          report("level ", m, ": cluster ", id, " has diameter ", space(x, y), " > 2 r = ", 2.0 * r);
        }
        if (other != id && !(space(x, y) > separation * (1.0 - kRelativeSlack))) {
          report("level ", m, ": clusters ", id, " and ", other, " only ", space(x, y), " apart, need > ",
                 separation);
        }
      }
    }
    if (m == levels) {
      for (const auto& [id, count] : cluster_sizes) {
        if (count != 1) report("level N = ", m, ": cluster ", id, " has ", count, " points");
      }
    }
  }

  std::vector<Point> last;
  for (Point x = 0; x < n; ++x) {
    if (levels == 0 || result.levels.back().cluster_of[x] != kNoCluster) last.push_back(x);
  }
  if (last != result.survivors) report("survivor list disagrees with level N assignment");

  if (result.survivors.size() >= 2) {
    const auto tree = ultrametric_of(result);
    if (!is_ultrametric_matrix(tree.value_matrix())) report("extracted values are not an ultrametric");
    for (std::size_t a = 0; a < tree.size(); ++a) {
      for (std::size_t b = a + 1; b < tree.size(); ++b) {
        const double d = space(tree.points()[a], tree.points()[b]);
        const double rho = tree.value(a, b);
        if (d > rho * (1.0 + kRelativeSlack) || rho > result.distortion * d * (1.0 + kRelativeSlack)) {
          report("pair (", tree.points()[a], ",", tree.points()[b], "): d = ", d, ", rho = ", rho,
                 " outside [d, D d]");
        }
      }
    }
    const double measured = distortion(space, tree);
    if (measured > result.distortion * (1.0 + kRelativeSlack)) {
      report("distortion ", measured, " exceeds D = ", result.distortion);
    }
  }
  return problems;
}

double expected_mass_bound(const FiniteMetricSpace& space, const RadiiSchedule& schedule, double distortion) {
  require_fragmentation_domain(space, distortion);
  const std::size_t levels = stopping_index(schedule, space.min_distance(), distortion);
  double total = 0.0;
  for (Point x = 0; x < space.size(); ++x) {
    double product = 1.0;
    for (std::size_t m = 1; m <= levels; ++m) {
      product *= static_cast<double>(ball_size(space, x, schedule[m])) /
                 static_cast<double>(ball_size(space, x, enlarged_radius(schedule, m, distortion)));
    }
    total += product;
  }
  return total;
}

double jensen_lower_bound(const FiniteMetricSpace& space, double distortion) {
  require_fragmentation_domain(space, distortion);
  const double beta = solve_beta(2.0 / distortion).value;
  double total = 0.0;
  for (Point x = 0; x < space.size(); ++x) {
    const auto jumps = jump_radii(space, x);
    double exponent = 0.0;
    for (std::size_t j = 1; j < jumps.size(); ++j) {
      const double window = interval_sum(beta, distortion, jumps[j].radius).total;
      exponent += window * std::log(static_cast<double>(jumps[j].ball_size) /
                                    static_cast<double>(jumps[j - 1].ball_size));
    }
    total += std::exp(-exponent);
  }
  return total;
}

}  // namespace mfrag
