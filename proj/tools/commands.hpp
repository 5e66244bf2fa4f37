#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stdpgen/config.hpp"

namespace stdpgen::cli {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::optional<std::size_t> neurons;
  std::optional<std::size_t> iterations;
  std::optional<std::string> rule;
  std::optional<std::string> dataset;
  std::optional<std::string> data_dir;
  std::optional<std::size_t> jobs;
};

/// Config file (or defaults) with command-line overrides applied, validated.
ExperimentConfig resolve_config(const GlobalOptions& g);

struct TrainArgs {
  bool save_increments = false;
};
struct SweepArgs {
  std::string axis = "sfr";
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
};
struct CalibrateArgs {
  std::optional<double> duration_ms;
};
struct LevyArgs {
  double alpha = 1.5;
  std::size_t steps = 1000;
  std::size_t dims = 3;
  double drift = 0.01;
  double scale = 1.0;
  double dt = 1.0;
  std::size_t grid = 512;
};
struct EstimateArgs {
  std::string input;
  std::string column;
  std::size_t k1 = 0;
};
struct OptimizeArgs {
  std::optional<std::size_t> budget;
  std::optional<std::size_t> initial;
  std::optional<std::size_t> k_folds;
};
struct EvaluateArgs {
  std::string model;
  std::size_t repeats = 5;
};

int run_train(const GlobalOptions& g, const TrainArgs& a);
int run_sweep(const GlobalOptions& g, const SweepArgs& a);
int run_calibrate(const GlobalOptions& g, const CalibrateArgs& a);
int run_levy_demo(const GlobalOptions& g, const LevyArgs& a);
int run_estimate_alpha(const GlobalOptions& g, const EstimateArgs& a);
int run_optimize(const GlobalOptions& g, const OptimizeArgs& a);
int run_evaluate(const GlobalOptions& g, const EvaluateArgs& a);

}  // namespace stdpgen::cli
