#include "mfrag/radii.hpp"

#include <algorithm>
#include <cmath>

#include "mfrag/errors.hpp"
#include "mfrag/random.hpp"

namespace mfrag {

namespace {
constexpr std::size_t kMaxLevels = 1'000'000;
}

RadiiSchedule RadiiSchedule::optimal(double beta, double u) {
  if (!(beta > 0.0 && beta < 1.0)) throw Error(Errc::DomainError, "beta must lie in (0, 1)");
  if (!(u >= 0.0 && u < 1.0)) throw Error(Errc::DomainError, "u must lie in [0, 1)");
  RadiiSchedule s;
  s.kind_ = Kind::optimal;
  s.beta_ = beta;
  s.u_ = u;
  s.log_ratio_ = std::log1p(-beta) / beta;
  return s;
}

RadiiSchedule RadiiSchedule::mn07_geometric(std::uint64_t seed) {
  RadiiSchedule s;
  s.kind_ = Kind::mn07_geometric;
  s.seed_ = seed;
  return s;
}

RadiiSchedule RadiiSchedule::custom(std::vector<double> values) {
  if (values.empty() || values.front() != 1.0) {
    throw Error(Errc::DomainError, "custom schedule must start at r_0 = 1");
  }
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || values[i] > values[i - 1]) {
      throw Error(Errc::DomainError, "custom schedule must be positive and non-increasing");
    }
  }
  RadiiSchedule s;
  s.kind_ = Kind::custom;
  s.listed_ = std::move(values);
  return s;
}

double RadiiSchedule::operator[](std::size_t n) const {
  if (n == 0) return 1.0;
  switch (kind_) {
    case Kind::optimal:
      return std::exp((u_ + static_cast<double>(n) - 1.0) * log_ratio_);
    case Kind::mn07_geometric: {
      const double scale = std::ldexp(1.0, -3 * static_cast<int>(std::min<std::size_t>(n, 340)));
      const double t = uniform01(derive_seed(seed_, n));
      return scale / 4.0 + t * (scale / 4.0);
    }
    case Kind::custom:
      return n < listed_.size() ? listed_[n] : listed_.back();
  }
  return 1.0;
}

const char* to_string(RadiiSchedule::Kind kind) noexcept {
  switch (kind) {
    case RadiiSchedule::Kind::optimal: return "optimal";
    case RadiiSchedule::Kind::mn07_geometric: return "mn07";
    case RadiiSchedule::Kind::custom: return "custom";
  }
  return "unknown";
}

std::size_t stopping_index(const RadiiSchedule& schedule, double d_min, double distortion) {
  if (!(d_min > 0.0)) throw Error(Errc::DomainError, "d_min must be positive");
  if (!(distortion > 2.0)) throw Error(Errc::DomainError, "distortion must exceed 2");
  double previous = schedule[0];
  for (std::size_t n = 1; n <= kMaxLevels; ++n) {
    const double current = schedule[n];
    if (2.0 * current < d_min && current + 2.0 * previous / distortion < d_min) return n;
    previous = current;
  }
  throw Error(Errc::NonTerminating, "schedule does not decay below d_min within 10^6 levels");
}

}  // namespace mfrag
