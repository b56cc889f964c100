#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace mfrag {

/// Root of a monotone scalar equation together with its certificate.
struct ExponentSolution {
  double value;
  double residual;                ///< equation left side minus right side at `value`
  std::pair<double, double> bracket;
};

/// f(beta) = beta * (1 - beta)^((1 - beta) / beta) on [0, 1], with f(0) = 0 and
/// f(1) = 1. Strictly increasing. Evaluated in log space.
double survival_exponent_map(double beta);

/// theta(D) in (0, 1) solving 2/D = (1 - theta) * theta^(theta / (1 - theta)).
/// The subset-size exponent guaranteed at distortion D > 2.
ExponentSolution solve_theta(double distortion);

/// beta(alpha) solving alpha = f(beta) for alpha in (0, 1]. With alpha = 2/D
/// this is the optimal admissible exponent, and theta(D) = 1 - beta(2/D).
ExponentSolution solve_beta(double alpha);

struct BetaPMinimum {
  double value;      ///< inf over x > 1 of ((1 + alpha x)^p - 1) / (x^p - 1)
  double minimizer;  ///< x at which the infimum is attained
};

/// Infimum defining beta_p(alpha) for alpha, p in (0, 1). The minimizing x is
/// bracketed by doubling and refined by golden-section search.
BetaPMinimum beta_p_minimum(double alpha, double p);
double beta_p(double alpha, double p);

/// Stationary point of the beta_p objective implied by a given beta_p value:
/// x0 = 1 / ((alpha / beta_p)^(1 / (1 - p)) - alpha).
double beta_p_critical_point(double alpha, double p, double beta_p_value);

struct IntervalTerm {
  std::size_t n;
  double lo;      ///< clipped open end
  double hi;      ///< clipped closed end
  double length;
};

/// U-intervals I_n = (a - n + 1, a - n + 1 + beta], a = beta log r / log(1 - beta),
/// clipped to [0, 1]. Only candidate terms that can meet [0, 1] are listed.
struct IntervalSum {
  double r;
  double a;
  std::vector<IntervalTerm> terms;
  double total;
};

/// Total length of the clipped intervals. For the optimal schedule
/// r_n = (1 - beta)^((U + n - 1) / beta) this equals
/// sum_n Pr[r_n < r <= r_n + 2 r_{n-1} / D] exactly when r <= 2/D; for larger
/// r it is an upper bound, because r_0 is pinned to 1 rather than following the
/// closed form. Throws ParameterMismatch when beta_val does not solve
/// f(beta) = 2/D to 1e-9.
IntervalSum interval_sum(double beta_val, double distortion, double r);

/// Maximum of interval_sum over a log-uniform grid of `grid` radii spanning
/// one period of a mod 1, endpoints included (r = 1 gives a = 0).
double sup_interval_sum(double beta_val, double distortion, std::size_t grid);

}  // namespace mfrag
