#include "mfrag/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "mfrag/errors.hpp"
#include "mfrag/random.hpp"

namespace mfrag {

namespace {

constexpr int kConnectAttempts = 100;
constexpr std::size_t kMaxDepth = 12;
constexpr std::size_t kMaxDim = 64;

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw Error(Errc::BadSpec, "bad value for " + key + ": '" + value + "'");
  return out;
}

Family parse_family(const std::string& name) {
  static const std::map<std::string, Family> names = {
      {"uniform", Family::uniform},
      {"path", Family::path},
      {"cycle", Family::cycle},
      {"euclidean", Family::euclidean},
      {"gnp", Family::gnp_shortest_path},
      {"gnp_shortest_path", Family::gnp_shortest_path},
      {"tree", Family::binary_tree},
      {"binary_tree", Family::binary_tree},
  };
  const auto it = names.find(name);
  if (it == names.end()) throw Error(Errc::BadSpec, "unknown family '" + name + "'");
  return it->second;
}

std::set<std::string> allowed_keys(Family family) {
  switch (family) {
    case Family::euclidean: return {"n", "seed", "dim"};
    case Family::gnp_shortest_path: return {"n", "seed", "p"};
    case Family::binary_tree: return {"n", "seed", "depth"};
    default: return {"n", "seed"};
  }
}

std::size_t tree_size(std::size_t depth) { return (std::size_t{2} << depth) - 1; }

void validate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw Error(Errc::BadSpec, "n must be at least 1");
  if (spec.family == Family::euclidean && (spec.dim < 1 || spec.dim > kMaxDim)) {
    throw Error(Errc::BadSpec, "dim must lie in [1, 64]");
  }
  if (spec.family == Family::gnp_shortest_path && !(spec.p > 0.0 && spec.p <= 1.0)) {
    throw Error(Errc::BadSpec, "p must lie in (0, 1]");
  }
  if (spec.family == Family::binary_tree) {
    if (spec.depth > kMaxDepth) throw Error(Errc::BadSpec, "depth must be at most 12");
    if (spec.n != tree_size(spec.depth)) {
      throw Error(Errc::BadSpec, "binary_tree of depth " + std::to_string(spec.depth) + " has " +
                                     std::to_string(tree_size(spec.depth)) + " points");
    }
  }
}

// Unweighted all-pairs shortest paths; returns false when some pair is unreachable.
bool graph_metric(std::size_t n, const std::vector<std::vector<std::size_t>>& adj, std::vector<double>& out) {
  out.assign(n * n, 0.0);
  std::vector<long> hops(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(hops.begin(), hops.end(), -1);
    hops[s] = 0;
    std::deque<std::size_t> queue{s};
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      for (auto w : adj[v]) {
        if (hops[w] < 0) {
          hops[w] = hops[v] + 1;
          queue.push_back(w);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (hops[t] < 0) return false;
      out[s * n + t] = static_cast<double>(hops[t]);
    }
  }
  return true;
}

std::vector<double> raw_distances(const GeneratorSpec& spec) {
  const std::size_t n = spec.n;
  std::vector<double> d(n * n, 0.0);
  auto fill = [&](auto&& f) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = i == j ? 0.0 : f(i, j);
  };
  switch (spec.family) {
    case Family::uniform:
      fill([](std::size_t, std::size_t) { return 1.0; });
      break;
    case Family::path:
      fill([](std::size_t i, std::size_t j) { return static_cast<double>(i > j ? i - j : j - i); });
      break;
    case Family::cycle:
      fill([n](std::size_t i, std::size_t j) {
        const std::size_t gap = i > j ? i - j : j - i;
        return static_cast<double>(std::min(gap, n - gap));
      });
      break;
    case Family::euclidean: {
      std::mt19937_64 rng(spec.seed);
      std::vector<double> coords(n * spec.dim);
      for (double& c : coords) c = uniform01(rng);
      fill([&](std::size_t i, std::size_t j) {
        double sq = 0.0;
        for (std::size_t k = 0; k < spec.dim; ++k) {
          const double diff = coords[i * spec.dim + k] - coords[j * spec.dim + k];
          sq += diff * diff;
        }
        return std::sqrt(sq);
      });
      break;
    }
    case Family::gnp_shortest_path: {
      for (int attempt = 0; attempt < kConnectAttempts; ++attempt) {
        std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
        std::vector<std::vector<std::size_t>> adj(n);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            if (uniform01(rng) < spec.p) {
              adj[i].push_back(j);
              adj[j].push_back(i);
            }
          }
        }
        if (graph_metric(n, adj, d)) return d;
      }
      throw Error(Errc::Disconnected, "G(n, p) stayed disconnected after 100 attempts");
    }
    case Family::binary_tree: {
      std::vector<std::vector<std::size_t>> adj(n);
      for (std::size_t v = 1; v < n; ++v) {
        adj[v].push_back((v - 1) / 2);
        adj[(v - 1) / 2].push_back(v);
      }
      graph_metric(n, adj, d);
      break;
    }
  }
  return d;
}

}  // namespace

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::uniform: return "uniform";
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::euclidean: return "euclidean";
    case Family::gnp_shortest_path: return "gnp";
    case Family::binary_tree: return "binary_tree";
  }
  return "unknown";
}

GeneratorSpec parse_generator_spec(const std::string& text) {
  const auto colon = text.find(':');
  GeneratorSpec spec;
  spec.family = parse_family(text.substr(0, colon));
  const auto keys = allowed_keys(spec.family);
  bool has_n = false;
  bool has_depth = false;

  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    std::set<std::string> seen;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(Errc::BadSpec, "expected key=value, got '" + item + "'");
      const auto key = item.substr(0, eq);
      const auto value = item.substr(eq + 1);
      if (!keys.count(key)) throw Error(Errc::BadSpec, "key '" + key + "' does not apply to " + to_string(spec.family));
      if (!seen.insert(key).second) throw Error(Errc::BadSpec, "duplicate key '" + key + "'");
      if (key == "n") {
        spec.n = parse_number<std::size_t>(key, value);
        has_n = true;
      } else if (key == "seed") {
        spec.seed = parse_number<std::uint64_t>(key, value);
      } else if (key == "dim") {
        spec.dim = parse_number<std::size_t>(key, value);
      } else if (key == "p") {
        spec.p = parse_number<double>(key, value);
      } else if (key == "depth") {
        spec.depth = parse_number<std::size_t>(key, value);
        has_depth = true;
      }
    }
  }

  if (spec.family == Family::binary_tree) {
    if (has_depth && !has_n) {
      if (spec.depth <= kMaxDepth) spec.n = tree_size(spec.depth);
    } else if (has_n && !has_depth) {
      while (spec.depth < kMaxDepth && tree_size(spec.depth) < spec.n) ++spec.depth;
    } else if (!has_n) {
      throw Error(Errc::BadSpec, "binary_tree needs depth or n");
    }
  } else if (!has_n) {
    throw Error(Errc::BadSpec, "missing n");
  }
  validate(spec);
  return spec;
}

std::string format_generator_spec(const GeneratorSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.family) << ":n=" << spec.n;
  switch (spec.family) {
    case Family::euclidean: os << ",dim=" << spec.dim << ",seed=" << spec.seed; break;
    case Family::gnp_shortest_path: {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, spec.p);
      os << ",p=" << std::string(buf, res.ptr) << ",seed=" << spec.seed;
      break;
    }
    case Family::binary_tree: os << ",depth=" << spec.depth; break;
    default: break;
  }
  return os.str();
}

FiniteMetricSpace generate(const GeneratorSpec& spec) {
  validate(spec);
  auto space = make_space(spec.n, raw_distances(spec));
  if (space.size() < 2) return space;
  return normalize(space).first;
}

}  // namespace mfrag
