#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace stdpgen {

/// Squared Silverman bandwidth t = (0.9 min(sd, IQR/1.34) N^(-1/5))^2.
/// Falls back to sd when the IQR is zero. Throws InvalidArgument when the
/// samples have fewer than two distinct values.
double kde_bandwidth(std::span<const double> samples);

/// Gaussian KDE f(x; t) = 1/N sum_i exp(-(x - X_i)^2 / (2t)) / sqrt(2 pi t).
double kde_evaluate(std::span<const double> samples, double t, double x);

struct DensityGrid {
  std::vector<double> x;
  std::vector<double> density;
};

/// Density on `points` evenly spaced values covering [lo, hi].
DensityGrid kde_grid(std::span<const double> samples, double t, double lo, double hi, std::size_t points);

/// Number of strict local maxima on a density grid (plateaus count once).
std::size_t count_modes(std::span<const double> density);

/// Linear-interpolation quantile (q in [0, 1]) of unsorted data.
double quantile(std::span<const double> samples, double q);

/// Third standardised moment m3 / m2^(3/2).
double skewness(std::span<const double> samples);

}  // namespace stdpgen
