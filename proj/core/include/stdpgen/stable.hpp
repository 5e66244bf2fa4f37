#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stdpgen/rng.hpp"

namespace stdpgen {

/// One draw from the symmetric alpha-stable law with characteristic function
/// exp(-|scale * t|^alpha), via the Chambers-Mallows-Stuck construction.
/// alpha = 2 gives N(0, 2 scale^2), alpha = 1 the Cauchy law.
/// Throws InvalidArgument unless 0 < alpha <= 2 and scale > 0.
double sample_alpha_stable(double alpha, double scale, Rng& rng);

std::vector<double> sample_alpha_stable(double alpha, double scale, std::size_t n, Rng& rng);

/// Row-major steps x dims path; row 0 is the initial state.
struct Trajectory {
  std::size_t steps = 0;
  std::size_t dims = 0;
  std::vector<double> values;

  double at(std::size_t step, std::size_t dim) const { return values[step * dims + dim]; }
  /// x[k+1] - x[k] along one dimension (steps - 1 values).
  std::vector<double> increments(std::size_t dim) const;
};

struct OuLevyParams {
  double alpha = 1.5;
  /// Mean-reversion rate (1/ms).
  double drift_rate = 0.01;
  double scale = 1.0;
  double dt = 1.0;
  std::size_t steps = 1000;
  std::size_t dims = 3;
};

/// Euler-Maruyama path of the Levy-driven Ornstein-Uhlenbeck process
///   x[k+1] = x[k] - drift_rate * x[k] * dt + scale * dt^(1/alpha) * xi[k]
/// with xi i.i.d. symmetric alpha-stable per dimension. `x0` defaults to the
/// origin; otherwise it must have `dims` entries.
Trajectory simulate_ou_levy(const OuLevyParams& params, Rng& rng, std::span<const double> x0 = {});

}  // namespace stdpgen
