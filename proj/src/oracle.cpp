#include "mfrag/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "mfrag/errors.hpp"

namespace mfrag {

namespace {

constexpr double kRelativeSlack = 1e-12;
constexpr std::size_t kMaxExhaustive = 20;
constexpr std::size_t kMaxCores = 1 << 16;

std::vector<double> scaled_restriction(const FiniteMetricSpace& space, const std::vector<Point>& subset,
                                       double factor) {
  const std::size_t k = subset.size();
  std::vector<double> w(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) w[a * k + b] = factor * space(subset[a], subset[b]);
  }
  return w;
}

// First pair (by position) whose subdominant value falls below d, if any.
bool find_violation(const FiniteMetricSpace& space, const std::vector<Point>& subset,
                    const SubdominantResult& sub, std::size_t& a_out, std::size_t& b_out) {
  const auto& rho = sub.matrix();
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      if (rho[a][b] < space(subset[a], subset[b]) * (1.0 - kRelativeSlack)) {
        a_out = a;
        b_out = b;
        return true;
      }
    }
  }
  return false;
}

void require_distortion(double distortion) {
  if (!(distortion >= 1.0)) throw Error(Errc::DomainError, "distortion must be at least 1");
}

}  // namespace

SubdominantResult subdominant_of(std::size_t n, const std::vector<double>& weights) {
  SubdominantResult out;
  out.parent_.assign(n, 0);
  out.depth_.assign(n, 0);
  out.matrix_.assign(n, std::vector<double>(n, 0.0));
  if (n == 0) return out;

  // Prim on the dense graph; `order` records insertion so that parents come first.
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in_tree(n, false);
  std::vector<Point> order;
  order.reserve(n);
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    Point next = n;
    for (Point v = 0; v < n; ++v) {
      if (!in_tree[v] && (next == n || best[v] < best[next])) next = v;
    }
    in_tree[next] = true;
    order.push_back(next);
    if (step > 0) out.depth_[next] = out.depth_[out.parent_[next]] + 1;
    for (Point v = 0; v < n; ++v) {
      if (!in_tree[v] && weights[next * n + v] < best[v]) {
        best[v] = weights[next * n + v];
        out.parent_[v] = next;
      }
    }
  }

  // Bottleneck to every earlier vertex: extend the parent's row by one edge.
  for (std::size_t i = 1; i < n; ++i) {
    const Point v = order[i];
    const Point p = out.parent_[v];
    const double edge = weights[p * n + v];
    for (std::size_t j = 0; j < i; ++j) {
      const Point u = order[j];
      const double via = u == p ? edge : std::max(edge, out.matrix_[p][u]);
      out.matrix_[v][u] = out.matrix_[u][v] = via;
    }
  }
  return out;
}

std::vector<Point> SubdominantResult::witness(Point x, Point y) const {
  std::vector<Point> from_x{x};
  std::vector<Point> from_y{y};
  while (x != y) {
    if (depth_[x] >= depth_[y]) {
      x = parent_[x];
      from_x.push_back(x);
    } else {
      y = parent_[y];
      from_y.push_back(y);
    }
  }
  from_y.pop_back();
  from_x.insert(from_x.end(), from_y.rbegin(), from_y.rend());
  return from_x;
}

SubdominantResult subdominant_ultrametric(const FiniteMetricSpace& space) {
  return subdominant_of(space.size(), std::vector<double>(space.values().begin(), space.values().end()));
}

bool embeddable(const FiniteMetricSpace& space, const std::vector<Point>& subset, double distortion) {
  require_distortion(distortion);
  for (Point x : subset) {
    if (x >= space.size()) throw Error(Errc::DomainError, "subset point outside the space");
  }
  if (subset.size() < 2) return true;
  const auto sub = subdominant_of(subset.size(), scaled_restriction(space, subset, distortion));
  std::size_t a = 0, b = 0;
  return !find_violation(space, subset, sub, a, b);
}

MaxSubset max_subset(const FiniteMetricSpace& space, double distortion, std::size_t size_cap) {
  require_distortion(distortion);
  const std::size_t n = space.size();
  if (n > kMaxExhaustive) throw Error(Errc::TooLarge, "exhaustive search is limited to 20 points");
  const std::size_t top = size_cap == 0 ? n : std::min(size_cap, n);

  // A failing core is a point set whose every superset fails: the two ends of
  // a violated pair plus the minimax path that undercuts their distance.
  std::vector<std::uint32_t> cores;
  auto contains_core = [&](std::uint32_t mask) {
    return std::any_of(cores.begin(), cores.end(), [&](std::uint32_t c) { return (mask & c) == c; });
  };

  for (std::size_t k = top; k >= 2; --k) {
    std::vector<Point> pick(k);
    std::iota(pick.begin(), pick.end(), Point{0});
    for (;;) {
      std::uint32_t mask = 0;
      for (Point x : pick) mask |= std::uint32_t{1} << x;
      if (!contains_core(mask)) {
        const auto sub = subdominant_of(k, scaled_restriction(space, pick, distortion));
        std::size_t a = 0, b = 0;
        if (!find_violation(space, pick, sub, a, b)) return {k, pick};
        if (cores.size() < kMaxCores) {
          std::uint32_t core = 0;
          for (std::size_t pos : sub.witness(a, b)) core |= std::uint32_t{1} << pick[pos];
          cores.push_back(core);
        }
      }
      // Advance to the next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  if (n == 0 || top == 0) return {0, {}};
  return {1, {0}};
}

}  // namespace mfrag
