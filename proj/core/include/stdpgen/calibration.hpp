#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stdpgen/kde.hpp"
#include "stdpgen/neuron.hpp"
#include "stdpgen/plasticity.hpp"

namespace stdpgen {

/// One conductance-based LIF neuron driven by `pools` groups of `per_pool`
/// plastic inputs. Inputs in a pool copy the spikes of a shared Poisson
/// driver with probability `correlation` and otherwise fire independently, so
/// every input fires at rate_hz and inputs within a pool are correlated.
struct CalibrationConfig {
  StdpConfig stdp;
  NeuronParams neuron;
  std::size_t pools = 4;
  std::size_t per_pool = 50;
  double rate_hz = 10.0;
  double correlation = 0.2;
  double duration_ms = 400000.0;
  double dt = 0.5;
  /// Conductance added per input spike is input_gain * w.
  double input_gain = 0.2;
  double w_init = 0.5;
  std::size_t kde_points = 256;
  std::uint64_t seed = 1;

  /// Matched settings used to compare the three rules.
  static CalibrationConfig defaults(StdpRule rule);

  void validate() const;
};

struct CalibrationResult {
  std::vector<double> weights;
  /// Squared KDE bandwidth and the density on [w_min, w_max].
  double bandwidth = 0.0;
  DensityGrid kde;
  std::uint64_t output_spikes = 0;
};

CalibrationResult calibration_pools(const CalibrationConfig& cfg);

/// Fraction of weights within 10% of the weight range from either bound.
double fraction_near_bounds(const std::vector<double>& weights, double w_min, double w_max);

}  // namespace stdpgen
