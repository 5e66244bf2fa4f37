#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <exception>

#include "commands.hpp"
#include "stdpgen/csv.hpp"
#include "stdpgen/errors.hpp"

namespace {
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 1;
}  // namespace

int main(int argc, char** argv) {
  using namespace stdpgen::cli;
  spdlog::set_default_logger(spdlog::stderr_color_mt("stdpgen"));
  spdlog::set_pattern("[%H:%M:%S] %v");

  CLI::App app{"Spiking-network STDP experiments: training, sweeps, calibration, tail-index estimation and "
               "Bayesian optimisation."};
  app.set_version_flag("--version", std::string(stdpgen::library_version()));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config, "YAML experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
  app.add_option("--neurons", g.neurons, "Excitatory (= inhibitory) neurons")->check(CLI::PositiveNumber);
  app.add_option("--iterations", g.iterations, "Training iterations of 600 images");
  app.add_option("--rule", g.rule, "STDP rule")->check(CLI::IsMember({"log", "add", "mult"}));
  app.add_option("--dataset", g.dataset, "Dataset")->check(CLI::IsMember({"mnist", "fashion"}));
  app.add_option("--data-dir", g.data_dir, "Dataset directory (default $STDPGEN_DATA_DIR/<dataset>)");
  app.add_option("--jobs", g.jobs, "Concurrent trainings for sweep/optimize")->check(CLI::PositiveNumber);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Progress logging");

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train one model and write per-iteration metrics");
  train->add_flag("--save-increments", train_args.save_increments, "Also write final-iteration weight increments");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Train one model per rule and SFR/eta value");
  sweep->add_option("--axis", sweep_args.axis, "sfr or eta")->check(CLI::IsMember({"sfr", "eta"}))->capture_default_str();
  sweep->add_option("--values", sweep_args.values, "Axis values (default per axis)");
  sweep->add_option("--seeds", sweep_args.seeds, "Replicate seeds (default: --seed)");

  CalibrateArgs cal_args;
  auto* cal = app.add_subcommand("calibrate", "Single-neuron correlated-pool weight distributions");
  cal->add_option("--duration", cal_args.duration_ms, "Simulated time per rule (ms)");

  LevyArgs levy_args;
  auto* levy = app.add_subcommand("levy-demo", "Levy-driven O-U trajectory and increment density");
  levy->add_option("--alpha", levy_args.alpha, "Stability index in (0, 2]")->capture_default_str();
  levy->add_option("--steps", levy_args.steps, "Trajectory length")->capture_default_str();
  levy->add_option("--dims", levy_args.dims, "Dimensions")->capture_default_str();
  levy->add_option("--drift", levy_args.drift, "Mean-reversion rate (1/ms)")->capture_default_str();
  levy->add_option("--scale", levy_args.scale, "Noise scale")->capture_default_str();
  levy->add_option("--dt", levy_args.dt, "Step (ms)")->capture_default_str();
  levy->add_option("--grid", levy_args.grid, "Density grid points")->capture_default_str();

  EstimateArgs est_args;
  auto* est = app.add_subcommand("estimate-alpha", "Tail index of a column of increments");
  est->add_option("--input", est_args.input, "Text or CSV file of samples")->required()->check(CLI::ExistingFile);
  est->add_option("--column", est_args.column, "CSV column name or 0-based index (default: last)");
  est->add_option("--k1", est_args.k1, "Block size (default floor(sqrt(N)))");

  OptimizeArgs opt_args;
  auto* opt = app.add_subcommand("optimize", "Bayesian optimisation of STDP hyperparameters (BG-index objective)");
  opt->add_option("--budget", opt_args.budget, "Functional evaluations");
  opt->add_option("--initial", opt_args.initial, "Latin-hypercube points");
  opt->add_option("--k-folds", opt_args.k_folds, "Training folds per evaluation");

  EvaluateArgs eval_args;
  auto* eval = app.add_subcommand("evaluate", "Frozen-model test accuracy over repeated shuffled passes");
  eval->add_option("--model", eval_args.model, "Model file (default <out-dir>/model.bin.gz)");
  eval->add_option("--repeats", eval_args.repeats, "Passes over the test set")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);

  try {
    if (*train) return run_train(g, train_args);
    if (*sweep) return run_sweep(g, sweep_args);
    if (*cal) return run_calibrate(g, cal_args);
    if (*levy) return run_levy_demo(g, levy_args);
    if (*est) return run_estimate_alpha(g, est_args);
    if (*opt) return run_optimize(g, opt_args);
    if (*eval) return run_evaluate(g, eval_args);
  } catch (const stdpgen::Error& e) {
    spdlog::error("{} error: {}", stdpgen::to_string(e.code()), e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
