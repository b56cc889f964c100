#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mfrag {

/// A realized non-increasing radii sequence 1 = r_0 >= r_1 >= ... > 0.
///
/// Values are pure functions of the generating parameters, so a schedule can
/// be copied and read from any number of threads.
class RadiiSchedule {
 public:
  enum class Kind { optimal, mn07_geometric, custom };

  /// r_n = (1 - beta)^((u + n - 1) / beta) for n >= 1, r_0 = 1.
  static RadiiSchedule optimal(double beta, double u);
  /// r_n independent uniform on [8^-n / 4, 8^-n / 2], drawn from `seed`.
  static RadiiSchedule mn07_geometric(std::uint64_t seed);
  /// Explicit values starting at r_0 = 1; the last value repeats forever.
  static RadiiSchedule custom(std::vector<double> values);

  double operator[](std::size_t n) const;

  Kind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  double u() const noexcept { return u_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<double>& listed() const noexcept { return listed_; }

 private:
  RadiiSchedule() = default;
  Kind kind_ = Kind::custom;
  double beta_ = 0.0;
  double u_ = 0.0;
  double log_ratio_ = 0.0;  // log(1 - beta) / beta
  std::uint64_t seed_ = 0;
  std::vector<double> listed_;
};

const char* to_string(RadiiSchedule::Kind kind) noexcept;

/// Smallest N >= 1 with 2 r_N < d_min and r_N + 2 r_{N-1} / D < d_min. From
/// that level on every cluster is a singleton that survives with certainty, so
/// later levels cannot change the outcome. Throws NonTerminating past 10^6.
std::size_t stopping_index(const RadiiSchedule& schedule, double d_min, double distortion);

}  // namespace mfrag
