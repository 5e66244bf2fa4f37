#include "stdpgen/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stdpgen/errors.hpp"

namespace stdpgen {

namespace {
void check_stable_params(double alpha, double scale) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw InvalidArgument("alpha must lie in (0, 2], got " + std::to_string(alpha));
  if (!(scale > 0.0)) throw InvalidArgument("stable scale must be > 0");
}

double standard_stable(double alpha, Rng& rng) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  std::uniform_real_distribution<double> unif(-half_pi, half_pi);
  std::exponential_distribution<double> expo(1.0);
  double v = unif(rng);
  while (v == -half_pi) v = unif(rng);
  if (alpha == 1.0) return std::tan(v);
  double w = expo(rng);
  while (w == 0.0) w = expo(rng);
  if (alpha == 2.0) {
    // Same formula; written out to avoid 0^0 in the second factor.
    return 2.0 * std::sin(v) * std::sqrt(w);
  }
  const double a = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
  const double b = std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return a * b;
}
}  // namespace

double sample_alpha_stable(double alpha, double scale, Rng& rng) {
  check_stable_params(alpha, scale);
  return scale * standard_stable(alpha, rng);
}

std::vector<double> sample_alpha_stable(double alpha, double scale, std::size_t n, Rng& rng) {
  check_stable_params(alpha, scale);
  std::vector<double> out(n);
  for (auto& x : out) x = scale * standard_stable(alpha, rng);
  return out;
}

std::vector<double> Trajectory::increments(std::size_t dim) const {
  std::vector<double> out;
  if (steps < 2) return out;
  out.reserve(steps - 1);
  for (std::size_t k = 0; k + 1 < steps; ++k) out.push_back(at(k + 1, dim) - at(k, dim));
  return out;
}

Trajectory simulate_ou_levy(const OuLevyParams& p, Rng& rng, std::span<const double> x0) {
  if (p.dims < 1) throw InvalidArgument("simulate_ou_levy: dims must be >= 1");
  if (!(p.dt > 0)) throw InvalidArgument("simulate_ou_levy: dt must be > 0");
  if (p.scale < 0) throw InvalidArgument("simulate_ou_levy: scale must be >= 0");
  if (!(p.alpha > 0.0 && p.alpha <= 2.0)) throw InvalidArgument("simulate_ou_levy: alpha must lie in (0, 2]");
  if (!x0.empty() && x0.size() != p.dims) throw InvalidArgument("simulate_ou_levy: x0 has wrong dimension");

  Trajectory traj{p.steps, p.dims, std::vector<double>(p.steps * p.dims, 0.0)};
  if (p.steps == 0) return traj;
  for (std::size_t d = 0; d < p.dims; ++d) traj.values[d] = x0.empty() ? 0.0 : x0[d];

  const double keep = 1.0 - p.drift_rate * p.dt;
  const double noise_scale = p.scale * std::pow(p.dt, 1.0 / p.alpha);
  for (std::size_t k = 1; k < p.steps; ++k) {
    for (std::size_t d = 0; d < p.dims; ++d) {
      const double prev = traj.values[(k - 1) * p.dims + d];
      const double xi = noise_scale > 0 ? noise_scale * standard_stable(p.alpha, rng) : 0.0;
      traj.values[k * p.dims + d] = keep * prev + xi;
    }
  }
  return traj;
}

}  // namespace stdpgen
