#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stdpgen/bayesopt.hpp"
#include "stdpgen/calibration.hpp"
#include "stdpgen/harness.hpp"
#include "stdpgen/search_space.hpp"
#include "stdpgen/sweep.hpp"
#include "stdpgen/topology.hpp"

namespace stdpgen {

struct TrainingSettings {
  std::size_t iterations = 10;
  std::size_t samples_per_iteration = 600;
  std::size_t train_eval_samples = 1000;
  std::size_t test_eval_samples = 0;
  std::size_t test_repeats = 1;
  std::size_t evaluate_every = 1;
  std::size_t reservoir_capacity = std::size_t{1} << 21;
  std::size_t tail_k1 = 0;

  bool operator==(const TrainingSettings&) const = default;
};

struct EncodingSettings {
  double duration_ms = 350.0;
  double rest_ms = 150.0;
  std::uint64_t min_spikes = 5;
  int max_boost = 8;
  /// Per-sample pixel-sum target; 0 disables. Fashion-MNIST uses
  /// kMnistMeanPixelSum when left at the default of -1.
  double normalize_sum = -1.0;

  bool operator==(const EncodingSettings&) const = default;
};

struct SweepSettings {
  SweepAxis axis = SweepAxis::kSfr;
  std::vector<double> values;
  std::vector<StdpRule> rules{StdpRule::kLog, StdpRule::kAdd, StdpRule::kMult};
  std::vector<std::uint64_t> seeds{1};

  bool operator==(const SweepSettings&) const = default;
};

struct CalibrationSettings {
  std::size_t pools = 4;
  std::size_t per_pool = 50;
  double rate_hz = 10.0;
  double correlation = 0.2;
  double duration_ms = 400000.0;
  double input_gain = 0.2;
  double w_init = 0.5;
  double eta = 0.01;
  std::size_t kde_points = 256;

  /// Matched defaults for `rule` with these overrides applied.
  CalibrationConfig to_config(StdpRule rule, std::uint64_t seed) const;
  bool operator==(const CalibrationSettings&) const = default;
};

struct BoSettings {
  /// When set, the STDP values in the config must lie inside the search space.
  bool enabled = false;
  std::size_t budget = 30;
  std::size_t initial_points = 8;
  std::size_t k_folds = 2;
  std::size_t candidates = 4096;
  SearchSpace space = SearchSpace::stdp_default();

  bool operator==(const BoSettings&) const = default;
};

struct ExperimentConfig {
  NetworkConfig network;
  TrainingSettings training;
  EncodingSettings encoding;
  SweepSettings sweep;
  CalibrationSettings calibration;
  BoSettings bo;
  std::string dataset = "mnist";
  /// Empty means default_dataset_dir(dataset).
  std::string data_dir;
  std::size_t jobs = 1;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  TrainOptions train_options() const;
  double normalize_sum() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses YAML text. Omitted keys keep their defaults; unknown keys, type
/// errors and domain violations throw ConfigError with key and line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Block YAML covering every field; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);
/// Same content on one line (flow style), for output headers.
std::string serialize_config_inline(const ExperimentConfig& cfg);

}  // namespace stdpgen
