#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mfrag/metric.hpp"
#include "mfrag/radii.hpp"

namespace mfrag {

using ClusterId = std::int64_t;
inline constexpr ClusterId kNoCluster = -1;

/// Outcome of one fragmentation step at scales (r, R).
struct FragmentLevel {
  /// Per point of the space: index (1-based) of the capturing sample when the
  /// point survived, kNoCluster otherwise.
  std::vector<ClusterId> cluster_of;
  /// Sample index -> point drawn at that index, for every non-empty cluster.
  std::map<ClusterId, Point> centers;
  std::uint64_t samples_drawn = 0;
};

/// One fragmentation step over the `active` points.
///
/// Samples are drawn uniformly from the whole space. Each active x is settled
/// by the first sample that lands in B(x, R): it survives in that sample's
/// cluster when the sample also lies in B(x, r), and is discarded otherwise.
/// Hence Pr[x survives] = |B(x, r)| / |B(x, R)|, survivors of a cluster lie in
/// B(center, r), and distinct clusters are more than R - r apart.
FragmentLevel fragment_once(const FiniteMetricSpace& space, const std::vector<Point>& active, double r,
                            double R, std::mt19937_64& rng);

struct FragmentationResult {
  std::size_t n = 0;
  double distortion = 0.0;
  RadiiSchedule schedule = RadiiSchedule::custom({1.0});
  std::size_t levels_used = 0;          ///< truncation level N
  std::vector<double> scales;           ///< r_0, ..., r_N
  std::vector<FragmentLevel> levels;    ///< levels[m - 1] is level m
  std::vector<Point> survivors;         ///< increasing order
  std::uint64_t seed = 0;
  std::optional<double> u;              ///< set for the optimal schedule
};

/// Iterates fragment_once at (r_m, r_m + 2 r_{m-1} / D) for m = 1..N, each level
/// on a fresh sample stream derived from `seed`. The space must have diameter
/// at most 2 and D must exceed 2.
FragmentationResult fragment_iterated(const FiniteMetricSpace& space, const RadiiSchedule& schedule,
                                      double distortion, std::uint64_t seed);

/// rho(x, y) = 2 r_{n(x,y)} where n(x,y) is the length of the common prefix of
/// the two survivors' cluster sequences.
UltrametricTree ultrametric_of(const FragmentationResult& result);

/// Structural checks on a finished run: nesting, cluster radius, separation,
/// singletons at level N, exact ultrametricity and distortion <= D (1 + 1e-12).
/// Returns one message per violation; empty means the run is sound.
std::vector<std::string> verify_result(const FiniteMetricSpace& space, const FragmentationResult& result);

/// sum_x prod_{n=1..N} |B(x, r_n)| / |B(x, r_n + 2 r_{n-1} / D)| for a realized
/// schedule. Lower-bounds E[|S|] over the sample streams.
double expected_mass_bound(const FiniteMetricSpace& space, const RadiiSchedule& schedule, double distortion);

/// sum_x exp(-sum_{j>=2} S(t_j) log(|B(x, t_j)| / |B(x, t_{j-1})|)) with t_j the
/// jump radii of x and S the interval sum of the optimal schedule for D. This
/// lower-bounds E[|S|] over U and the samples, and is at least n^(1 - beta(2/D)).
double jensen_lower_bound(const FiniteMetricSpace& space, double distortion);

}  // namespace mfrag
