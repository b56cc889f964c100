#include "mfrag/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "mfrag/errors.hpp"

namespace mfrag {

namespace {

constexpr double kBracketLo = 1e-15;
constexpr double kBracketHi = 1.0 - 1e-15;
constexpr double kMismatchTolerance = 1e-9;

// log f(beta) for beta in (0, 1).
double log_exponent_map(double beta) {
  return std::log(beta) + ((1.0 - beta) / beta) * std::log1p(-beta);
}

// log of (1 - theta) * theta^(theta / (1 - theta)) for theta in (0, 1).
double log_theta_map(double theta) {
  return std::log1p(-theta) + (theta / (1.0 - theta)) * std::log(theta);
}

// Bisection for an increasing function on [kBracketLo, kBracketHi]; runs
// until the midpoint is no longer representable between the ends.
std::pair<double, double> bisect_increasing(const std::function<double(double)>& g) {
  double lo = kBracketLo;
  double hi = kBracketHi;
  if (g(lo) >= 0.0) return {lo, lo};
  if (g(hi) <= 0.0) return {hi, hi};
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw Error(Errc::DomainError, std::string(name) + " must lie in (0, 1), got " + std::to_string(v));
  }
}

void check_interval_params(double beta_val, double distortion, double r) {
  require_open_unit(beta_val, "beta");
  if (!(distortion > 2.0) || !std::isfinite(distortion)) {
    throw Error(Errc::DomainError, "distortion must be a finite value above 2");
  }
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(Errc::DomainError, "probe radius must be positive");
  const double mismatch = survival_exponent_map(beta_val) - 2.0 / distortion;
  if (std::abs(mismatch) > kMismatchTolerance) {
    throw Error(Errc::ParameterMismatch,
                "beta does not solve f(beta) = 2/D (off by " + std::to_string(mismatch) + ")");
  }
}

}  // namespace

double survival_exponent_map(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw Error(Errc::DomainError, "f is defined on [0, 1]");
  if (beta == 0.0) return 0.0;
  if (beta == 1.0) return 1.0;
  return std::exp(log_exponent_map(beta));
}

ExponentSolution solve_theta(double distortion) {
  if (!(distortion > 2.0) || !std::isfinite(distortion)) {
    throw Error(Errc::DomainError, "theta(D) requires a finite D > 2");
  }
  const double alpha = 2.0 / distortion;
  const double log_alpha = std::log(alpha);
  // The map is decreasing in theta, so bisect its negation.
  const auto [lo, hi] = bisect_increasing([&](double t) { return log_alpha - log_theta_map(t); });
  const double theta = lo + (hi - lo) / 2.0;
  const double rhs = std::exp(log_theta_map(theta));
  return {theta, rhs - alpha, {lo, hi}};
}

ExponentSolution solve_beta(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(Errc::DomainError, "alpha must lie in (0, 1]");
  if (alpha == 1.0) return {1.0, 0.0, {1.0, 1.0}};
  const double log_alpha = std::log(alpha);
  const auto [lo, hi] = bisect_increasing([&](double b) { return log_exponent_map(b) - log_alpha; });
  const double beta = lo + (hi - lo) / 2.0;
  return {beta, survival_exponent_map(beta) - alpha, {lo, hi}};
}

BetaPMinimum beta_p_minimum(double alpha, double p) {
  require_open_unit(alpha, "alpha");
  require_open_unit(p, "p");
  auto objective = [&](double x) {
    return std::expm1(p * std::log1p(alpha * x)) / std::expm1(p * std::log(x));
  };

  // Grow the window until the objective turns upward.
  double x = 2.0;
  double fx = objective(x);
  double lo = 1.0;
  for (;;) {
    const double next = 2.0 * x;
    if (!std::isfinite(next) || next > 0x1.0p+1000) {
      throw Error(Errc::DomainError, "beta_p objective did not turn upward");
    }
    const double fnext = objective(next);
    if (fnext >= fx) {
      lo = std::max(1.0, x / 2.0);
      break;
    }
    x = next;
    fx = fnext;
  }
  double hi = 2.0 * x;
  if (lo == 1.0) lo = std::nextafter(1.0, 2.0);

  constexpr double kInvPhi = 0.6180339887498948482;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  for (int iter = 0; iter < 400 && (hi - lo) > 1e-10 * c; ++iter) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = objective(d);
    }
  }
  const double best = fc < fd ? c : d;
  return {std::min(fc, fd), best};
}

double beta_p(double alpha, double p) { return beta_p_minimum(alpha, p).value; }

double beta_p_critical_point(double alpha, double p, double beta_p_value) {
  return 1.0 / (std::pow(alpha / beta_p_value, 1.0 / (1.0 - p)) - alpha);
}

IntervalSum interval_sum(double beta_val, double distortion, double r) {
  check_interval_params(beta_val, distortion, r);
  IntervalSum out{r, beta_val * std::log(r) / std::log1p(-beta_val), {}, 0.0};

  // I_n meets [0, 1] only for a < n < a + 1 + beta.
  const double first = std::max(1.0, std::floor(out.a));
  const double last = std::floor(out.a + 1.0 + beta_val);
  for (double n = first; n <= last; n += 1.0) {
    const double open_end = out.a - n + 1.0;
    const double closed_end = open_end + beta_val;
    const double lo = std::clamp(open_end, 0.0, 1.0);
    const double hi = std::clamp(closed_end, 0.0, 1.0);
    const double length = std::max(0.0, hi - lo);
    out.terms.push_back({static_cast<std::size_t>(n), lo, std::max(lo, hi), length});
    out.total += length;
  }
  return out;
}

double sup_interval_sum(double beta_val, double distortion, std::size_t grid) {
  if (grid < 10) throw Error(Errc::DomainError, "grid must have at least 10 radii");
  check_interval_params(beta_val, distortion, 1.0);
  // a runs from 0 (r = 1) to 1 (r = (1 - beta)^(1/beta)).
  const double log_r_min = std::log1p(-beta_val) / beta_val;
  double best = 0.0;
  for (std::size_t k = 0; k < grid; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(grid - 1);
    best = std::max(best, interval_sum(beta_val, distortion, std::exp(t * log_r_min)).total);
  }
  return best;
}

}  // namespace mfrag
