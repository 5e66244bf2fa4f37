#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "stdpgen/rng.hpp"

namespace stdpgen {

struct GpHyper {
  /// One length scale per input dimension (unit-cube coordinates).
  std::vector<double> length_scales;
  /// Kernel amplitude and observation noise, both in standardised units.
  double signal_var = 1.0;
  double noise_var = 1e-4;
};

struct GpPrediction {
  double mean = 0.0;
  /// Variance of the latent function (noise excluded), >= 0.
  double variance = 0.0;
};

/// Matern-5/2 ARD kernel.
double matern52(std::span<const double> a, std::span<const double> b, const GpHyper& h);

struct GpFitOptions {
  std::size_t restarts = 5;
  std::size_t max_iterations = 400;
  double min_noise_var = 1e-6;
};

/// Gaussian-process regression on points in [0, 1]^d with standardised
/// outputs. Predictions are returned in the original output units.
class GaussianProcess {
 public:
  GaussianProcess(std::vector<std::vector<double>> x, std::vector<double> y, GpHyper hyper);
  ~GaussianProcess();
  GaussianProcess(GaussianProcess&&) noexcept;
  GaussianProcess& operator=(GaussianProcess&&) noexcept;

  /// Maximises the log marginal likelihood over log length scales, log signal
  /// and log noise variance with Nelder-Mead from several starts. Throws
  /// OptimizationError with fewer than two points.
  static GaussianProcess fit(std::vector<std::vector<double>> x, std::vector<double> y, Rng& rng,
                             const GpFitOptions& opts = {});

  GpPrediction predict(std::span<const double> x) const;

  /// Log marginal likelihood of the standardised outputs.
  double log_marginal_likelihood() const noexcept { return lml_; }
  const GpHyper& hyper() const noexcept { return hyper_; }
  /// Noise variance in original output units.
  double noise_variance() const noexcept { return hyper_.noise_var * y_scale_ * y_scale_; }
  std::size_t size() const noexcept { return x_.size(); }

 private:
  struct Impl;
  std::vector<std::vector<double>> x_;
  std::vector<double> y_;
  GpHyper hyper_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  double lml_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

/// (f_min - mu) Phi(z) + s phi(z), z = (f_min - mu) / s; max(f_min - mu, 0)
/// when s == 0.
double expected_improvement(double mu, double s, double f_min) noexcept;

double expected_improvement(const GaussianProcess& gp, std::span<const double> x, double f_min);

}  // namespace stdpgen
