#include "stdpgen/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stdpgen/errors.hpp"

namespace stdpgen {

double quantile(std::span<const double> samples, double q) {
  if (samples.empty()) throw InvalidArgument("quantile of empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

double kde_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw InvalidArgument("kde_bandwidth: need at least two samples");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw InvalidArgument("kde_bandwidth: samples are degenerate (zero spread)");
  const double iqr = quantile(samples, 0.75) - quantile(samples, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  return h * h;
}

double kde_evaluate(std::span<const double> samples, double t, double x) {
  if (!(t > 0.0)) throw InvalidArgument("kde_evaluate: bandwidth must be > 0");
  if (samples.empty()) return 0.0;
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * t);
  double acc = 0.0;
  for (double xi : samples) {
    const double d = x - xi;
    acc += std::exp(-d * d / (2.0 * t));
  }
  return norm * acc / static_cast<double>(samples.size());
}

DensityGrid kde_grid(std::span<const double> samples, double t, double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw InvalidArgument("kde_grid: need points >= 2 and hi > lo");
  DensityGrid g;
  g.x.resize(points);
  g.density.resize(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) {
    g.x[k] = lo + step * static_cast<double>(k);
    g.density[k] = kde_evaluate(samples, t, g.x[k]);
  }
  return g;
}

std::size_t count_modes(std::span<const double> density) {
  std::size_t modes = 0;
  const std::size_t n = density.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && density[j + 1] == density[i]) ++j;
    const bool rises_in = i == 0 || density[i - 1] < density[i];
    const bool falls_out = j + 1 == n || density[j + 1] < density[i];
    if (rises_in && falls_out && !(i == 0 && j + 1 == n)) ++modes;
    i = j + 1;
  }
  return modes;
}

double skewness(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 3) throw InvalidArgument("skewness: need at least three samples");
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  if (!(m2 > 0.0)) return 0.0;
  return m3 / std::pow(m2, 1.5);
}

}  // namespace stdpgen
