#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace mfrag {

using Point = std::size_t;
using Matrix = std::vector<std::vector<double>>;

/// A validated finite metric space stored as a dense row-major distance matrix.
///
/// Construction goes through make_space(), which rejects anything that is not a
/// metric on distinct points. Once built the value is immutable.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return n_; }
  double operator()(Point x, Point y) const noexcept { return dist_[x * n_ + y]; }
  std::span<const double> row(Point x) const noexcept { return {dist_.data() + x * n_, n_}; }
  std::span<const double> values() const noexcept { return dist_; }

  double diameter() const noexcept { return diameter_; }
  // Smallest positive pairwise distance; +infinity for a single point.
  double min_distance() const noexcept { return d_min_; }

  Matrix to_matrix() const;

 private:
  friend FiniteMetricSpace make_space(std::size_t n, std::vector<double> flat);
  FiniteMetricSpace(std::size_t n, std::vector<double> dist, double diameter, double d_min)
      : n_(n), dist_(std::move(dist)), diameter_(diameter), d_min_(d_min) {}

  std::size_t n_;
  std::vector<double> dist_;
  double diameter_;
  double d_min_;
};

// Validation order: shape, finiteness, diagonal, symmetry, positivity, then the
// triangle inequality with slack 1e-12 * diameter.
FiniteMetricSpace make_space(const Matrix& matrix);
FiniteMetricSpace make_space(std::size_t n, std::vector<double> flat);

/// Closed ball {y : d(center, y) <= radius}, in increasing point order.
std::vector<Point> ball(const FiniteMetricSpace& space, Point center, double radius);
std::size_t ball_size(const FiniteMetricSpace& space, Point center, double radius);

struct JumpRadius {
  double radius;
  std::size_t ball_size;
};

/// Radii at which |B(center, t)| increases, starting with (0, 1).
std::vector<JumpRadius> jump_radii(const FiniteMetricSpace& space, Point center);

/// Rescales to diameter exactly 2. Returns the space and the factor f with
/// original = returned * f.
std::pair<FiniteMetricSpace, double> normalize(const FiniteMetricSpace& space);

/// Hierarchy over a set of points. Pairs store the integer separation level,
/// so the strong triangle inequality holds exactly whatever the scales are.
class UltrametricTree {
 public:
  // `levels` is k x k over positions in `points`; the diagonal is ignored.
  // Throws DomainError if the levels lack the prefix property, reference a
  // missing scale, or if the scales are not positive and non-increasing.
  static UltrametricTree make(std::vector<Point> points, std::vector<std::vector<std::size_t>> levels,
                              std::vector<double> scale_at_level);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<double>& scales() const noexcept { return scales_; }

  // Arguments are positions into points(), a != b.
  std::size_t level(std::size_t a, std::size_t b) const;
  double value(std::size_t a, std::size_t b) const;

  // k x k matrix of values with a zero diagonal.
  Matrix value_matrix() const;

 private:
  UltrametricTree() = default;
  std::vector<Point> points_;
  std::vector<std::size_t> levels_;
  std::vector<double> scales_;
};

/// (max rho/d) / (min rho/d) over survivor pairs; 1 for fewer than two points.
double distortion(const FiniteMetricSpace& space, const UltrametricTree& tree);

/// Strong triangle inequality over all triples, exact comparison. The matrix is
/// validated as a metric first and validation errors propagate.
bool is_ultrametric_matrix(const Matrix& matrix);

}  // namespace mfrag
