#include "mfrag/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfrag/errors.hpp"

namespace mfrag {

namespace {

std::string pair_name(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

FiniteMetricSpace make_space(const Matrix& matrix) {
  const std::size_t n = matrix.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw Error(Errc::NotSquare, "row " + std::to_string(i) + " has " +
                                       std::to_string(matrix[i].size()) + " entries, expected " +
                                       std::to_string(n));
    }
    flat.insert(flat.end(), matrix[i].begin(), matrix[i].end());
  }
  return make_space(n, std::move(flat));
}

FiniteMetricSpace make_space(std::size_t n, std::vector<double> flat) {
  if (n == 0) throw Error(Errc::DomainError, "a metric space needs at least one point");
  if (flat.size() != n * n) {
    throw Error(Errc::NotSquare, "expected " + std::to_string(n * n) + " entries, got " +
                                     std::to_string(flat.size()));
  }
  auto at = [&](std::size_t i, std::size_t j) { return flat[i * n + j]; };

  for (std::size_t i = 0; i < n * n; ++i) {
    if (!std::isfinite(flat[i])) {
      throw Error(Errc::NonFinite, "entry " + pair_name(i / n, i % n) + " is not finite");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != 0.0) throw Error(Errc::NonzeroDiagonal, "entry " + pair_name(i, i));
  }
  double diameter = 0.0;
  double d_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (at(i, j) != at(j, i)) {
        throw Error(Errc::NotSymmetric, "entries " + pair_name(i, j) + " and " + pair_name(j, i));
      }
      if (!(at(i, j) > 0.0)) {
        throw Error(Errc::ZeroOffDiagonal,
                    "distinct points " + pair_name(i, j) + " at non-positive distance");
      }
      diameter = std::max(diameter, at(i, j));
      d_min = std::min(d_min, at(i, j));
    }
  }

  const double slack = 1e-12 * diameter;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double direct = at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double detour = at(i, j) + at(j, k);
        if (direct > detour + slack) throw TriangleViolation(i, j, k, direct, detour);
      }
    }
  }
  return FiniteMetricSpace(n, std::move(flat), diameter, d_min);
}

Matrix FiniteMetricSpace::to_matrix() const {
  Matrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto r = row(i);
    out[i].assign(r.begin(), r.end());
  }
  return out;
}

std::vector<Point> ball(const FiniteMetricSpace& space, Point center, double radius) {
  std::vector<Point> members;
  const auto r = space.row(center);
  for (Point y = 0; y < space.size(); ++y) {
    if (r[y] <= radius) members.push_back(y);
  }
  return members;
}

std::size_t ball_size(const FiniteMetricSpace& space, Point center, double radius) {
  const auto r = space.row(center);
  return static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [&](double d) { return d <= radius; }));
}

std::vector<JumpRadius> jump_radii(const FiniteMetricSpace& space, Point center) {
  const auto r = space.row(center);
  std::vector<double> sorted(r.begin(), r.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<JumpRadius> jumps;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Ball size at radius sorted[i] counts every entry equal to it.
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    jumps.push_back({sorted[i], i + 1});
  }
  return jumps;
}

std::pair<FiniteMetricSpace, double> normalize(const FiniteMetricSpace& space) {
  if (space.size() < 2) throw Error(Errc::SinglePoint, "cannot normalize a single point");
  const double factor = space.diameter() / 2.0;
  std::vector<double> scaled(space.values().begin(), space.values().end());
  // x / (x/2) == 2 exactly, so the diameter lands on 2 without rounding.
  for (double& d : scaled) d /= factor;
  return {make_space(space.size(), std::move(scaled)), factor};
}

UltrametricTree UltrametricTree::make(std::vector<Point> points,
                                      std::vector<std::vector<std::size_t>> levels,
                                      std::vector<double> scale_at_level) {
  const std::size_t k = points.size();
  if (levels.size() != k) throw Error(Errc::DomainError, "level matrix does not match point count");
  if (scale_at_level.empty()) throw Error(Errc::DomainError, "no scales");
  for (std::size_t i = 0; i < scale_at_level.size(); ++i) {
    if (!(scale_at_level[i] > 0.0)) throw Error(Errc::DomainError, "scales must be positive");
    if (i > 0 && scale_at_level[i] > scale_at_level[i - 1]) {
      throw Error(Errc::DomainError, "scales must be non-increasing");
    }
  }

  UltrametricTree tree;
  tree.levels_.assign(k * k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    if (levels[a].size() != k) throw Error(Errc::DomainError, "level matrix is not square");
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      if (levels[a][b] != levels[b][a]) throw Error(Errc::DomainError, "level matrix is not symmetric");
      if (levels[a][b] >= scale_at_level.size()) {
        throw Error(Errc::DomainError, "separation level has no scale");
      }
      tree.levels_[a * k + b] = levels[a][b];
    }
  }
  // Prefix property: n(x,z) >= min(n(x,y), n(y,z)).
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      if (y == x) continue;
      for (std::size_t z = 0; z < k; ++z) {
        if (z == x || z == y) continue;
        const auto lxz = tree.levels_[x * k + z];
        if (lxz < std::min(tree.levels_[x * k + y], tree.levels_[y * k + z])) {
          throw Error(Errc::DomainError, "separation levels violate the prefix property at " +
                                             pair_name(x, z) + " via " + std::to_string(y));
        }
      }
    }
  }
  tree.points_ = std::move(points);
  tree.scales_ = std::move(scale_at_level);
  return tree;
}

std::size_t UltrametricTree::level(std::size_t a, std::size_t b) const {
  if (a == b) throw Error(Errc::DomainError, "separation level of a point with itself");
  return levels_[a * points_.size() + b];
}

double UltrametricTree::value(std::size_t a, std::size_t b) const { return 2.0 * scales_[level(a, b)]; }

Matrix UltrametricTree::value_matrix() const {
  const std::size_t k = points_.size();
  Matrix out(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a != b) out[a][b] = value(a, b);
    }
  }
  return out;
}

double distortion(const FiniteMetricSpace& space, const UltrametricTree& tree) {
  const auto& pts = tree.points();
  if (pts.size() < 2) return 1.0;
  double max_ratio = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < pts.size(); ++a) {
    if (pts[a] >= space.size()) throw Error(Errc::DomainError, "tree point outside the space");
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const double ratio = tree.value(a, b) / space(pts[a], pts[b]);
      max_ratio = std::max(max_ratio, ratio);
      min_ratio = std::min(min_ratio, ratio);
    }
  }
  return max_ratio / min_ratio;
}

bool is_ultrametric_matrix(const Matrix& matrix) {
  const auto space = make_space(matrix);
  const std::size_t n = space.size();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      for (std::size_t w = 0; w < n; ++w) {
        if (w == u || w == v) continue;
        if (space(u, v) > std::max(space(u, w), space(w, v))) return false;
      }
    }
  }
  return true;
}

}  // namespace mfrag
