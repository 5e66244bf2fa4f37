#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stdpgen/harness.hpp"

namespace stdpgen {

enum class SweepAxis { kSfr, kEta };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& s);

/// SFR {0.9, 1.2, 1.7, 2.1}; eta {0.05, 0.1, 0.15, 0.2}.
std::vector<double> default_axis_values(SweepAxis axis);

/// STDP settings of one sweep cell. The depression amplitude of `base` is
/// taken as the log/add value; mult uses c_minus / w0 so that all rules share
/// the same depression at w0. SFR sets c_plus = value * c_minus.
StdpConfig sweep_cell_stdp(const StdpConfig& base, StdpRule rule, SweepAxis axis, double value);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kSfr;
  std::vector<double> values;  // empty means default_axis_values(axis)
  std::vector<StdpRule> rules{StdpRule::kLog, StdpRule::kAdd, StdpRule::kMult};
  /// Every rule/value cell is trained once per seed. Cells sharing a seed
  /// share initial weights and sample order.
  std::vector<std::uint64_t> seeds{1};
  std::size_t jobs = 1;
};

struct SweepCell {
  StdpRule rule = StdpRule::kLog;
  double value = 0.0;
  std::uint64_t seed = 0;
  /// NaN when the final iteration logged too few increments.
  double bg_index = 0.0;
  double generalization_error = 0.0;
  double training_accuracy = 0.0;
  double testing_accuracy = 0.0;
  double training_loss = 0.0;
  /// Set when training failed (e.g. the network fell silent); metrics are NaN.
  std::string error;
};

/// Trains one network per (seed, rule, value) cell. Results are ordered by
/// seed, then rule, then value regardless of `jobs`.
std::vector<SweepCell> run_sweep(const NetworkConfig& base, const SweepSpec& spec,
                                 std::span<const ImageSample> train_set, std::span<const ImageSample> test_set,
                                 const TrainOptions& opts, const std::function<void(const SweepCell&)>& on_cell = {});

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// Runs fn(0..n-1) on up to `jobs` threads. The first exception is rethrown
/// after all workers stop.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

}  // namespace stdpgen
