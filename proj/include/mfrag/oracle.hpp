#pragma once

#include <cstddef>
#include <vector>

#include "mfrag/metric.hpp"

namespace mfrag {

/// Largest ultrametric lying entrywise below a metric: rho*(x, y) is the
/// minimax (bottleneck) path weight, read off a minimum spanning tree.
class SubdominantResult {
 public:
  const Matrix& matrix() const noexcept { return matrix_; }
  /// Minimax path from x to y along the spanning tree, both ends included.
  std::vector<Point> witness(Point x, Point y) const;

 private:
  friend SubdominantResult subdominant_of(std::size_t n, const std::vector<double>& weights);
  Matrix matrix_;
  std::vector<Point> parent_;  // spanning tree rooted at 0
  std::vector<std::size_t> depth_;
};

/// Subdominant ultrametric of an arbitrary symmetric weight matrix (row-major).
SubdominantResult subdominant_of(std::size_t n, const std::vector<double>& weights);
SubdominantResult subdominant_ultrametric(const FiniteMetricSpace& space);

/// Whether some ultrametric rho on `subset` has d <= rho <= D d. Exact: the
/// subdominant ultrametric of D d is the largest candidate, so it is enough to
/// test it against d (relative slack 1e-12). Subsets of fewer than two points
/// are trivially embeddable.
bool embeddable(const FiniteMetricSpace& space, const std::vector<Point>& subset, double distortion);

struct MaxSubset {
  std::size_t size;
  std::vector<Point> witness;
};

/// Largest embeddable subset by exhaustive search (n <= 20), scanning sizes
/// downward from min(size_cap, n) and subsets of a size in lexicographic order.
/// Supersets of known failing cores are skipped. size_cap = 0 means n.
MaxSubset max_subset(const FiniteMetricSpace& space, double distortion, std::size_t size_cap = 0);

}  // namespace mfrag
