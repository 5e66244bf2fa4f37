#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "stdpgen/bayesopt.hpp"
#include "stdpgen/calibration.hpp"
#include "stdpgen/csv.hpp"
#include "stdpgen/errors.hpp"
#include "stdpgen/harness.hpp"
#include "stdpgen/idx.hpp"
#include "stdpgen/kde.hpp"
#include "stdpgen/model_io.hpp"
#include "stdpgen/stable.hpp"
#include "stdpgen/sweep.hpp"
#include "stdpgen/tail_index.hpp"
#include "stdpgen/trial_log.hpp"

namespace fs = std::filesystem;

namespace stdpgen::cli {

ExperimentConfig resolve_config(const GlobalOptions& g) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
  if (g.seed) c.network.seed = *g.seed;
  if (g.neurons) c.network.n_exc = c.network.n_inh = *g.neurons;
  if (g.iterations) c.training.iterations = *g.iterations;
  if (g.rule) c.network.stdp = switch_rule(c.network.stdp, parse_rule(*g.rule));
  if (g.dataset) c.dataset = *g.dataset;
  if (g.data_dir) c.data_dir = *g.data_dir;
  if (g.jobs) c.jobs = *g.jobs;
  c.validate();
  return c;
}

namespace {

fs::path out_path(const GlobalOptions& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

std::string header(const ExperimentConfig& c) { return output_header(c.network.seed, serialize_config_inline(c)); }

Dataset load_split(const ExperimentConfig& c, Split split) {
  const auto name = parse_dataset_name(c.dataset);
  const fs::path dir = c.data_dir.empty() ? default_dataset_dir(name) : fs::path(c.data_dir);
  spdlog::info("loading {} {} from {}", c.dataset, split == Split::kTrain ? "train" : "test", dir.string());
  return load_dataset(dir, name, split);
}

std::string opt_number(const std::optional<double>& v) {
  return v ? format_number(*v) : format_number(std::numeric_limits<double>::quiet_NaN());
}

}  // namespace

int run_train(const GlobalOptions& g, const TrainArgs& a) {
  const auto cfg = resolve_config(g);
  const auto train_set = load_split(cfg, Split::kTrain);
  const auto test_set = load_split(cfg, Split::kTest);

  CsvWriter metrics(out_path(g, "metrics.csv"), header(cfg),
                    {"iteration", "train_loss", "train_acc", "test_acc", "test_acc_std", "gen_err", "bg_index"});
  TrainOptions opts = cfg.train_options();
  opts.on_metrics = [&](const Metrics& m) {
    spdlog::info("iteration {}: loss {:.4f} train {:.2f}% test {:.2f}% ({:.0f} s)", m.iteration, m.training_loss,
                 m.training_accuracy, m.testing_accuracy, m.wall_time_s);
    metrics.row({std::to_string(m.iteration), format_number(m.training_loss), format_number(m.training_accuracy),
                 format_number(m.testing_accuracy), format_number(m.testing_accuracy_std),
                 format_number(m.generalization_error), opt_number(m.bg_index)});
  };
  const auto res = train(cfg.network, train_set.samples, test_set.samples, opts);
  metrics.close();
  save_model(out_path(g, "model.bin.gz"), capture_model(res.network, res.assignment));

  if (a.save_increments) {
    CsvWriter inc(out_path(g, "increments.csv"), header(cfg), {"group", "delta"});
    for (const auto& name : res.increments.group_names())
      for (double d : res.increments.samples(name)) inc.row({name, format_number(d)});
    inc.close();
  }
  return 0;
}

int run_evaluate(const GlobalOptions& g, const EvaluateArgs& a) {
  const auto cfg = resolve_config(g);
  if (a.repeats == 0) throw InvalidArgument("--repeats must be >= 1");
  const fs::path model_path = a.model.empty() ? fs::path(g.out_dir) / "model.bin.gz" : fs::path(a.model);
  const auto model = load_model(model_path);
  Network net = restore_network(cfg.network, model);
  const auto test_set = load_split(cfg, Split::kTest);
  std::size_t n = cfg.training.test_eval_samples;
  n = n == 0 ? test_set.size() : std::min(n, test_set.size());
  EvalOptions eo;
  eo.retry = cfg.train_options().retry;
  eo.normalize_sum = cfg.normalize_sum();
  const auto st = evaluate_accuracy(net, model.assignment, std::span(test_set.samples).first(n), a.repeats,
                                    derive_seed(cfg.network.seed, {stream::kEvaluation}), eo);
  CsvWriter out(out_path(g, "evaluate.csv"), header(cfg), {"repeat", "test_acc"});
  for (std::size_t r = 0; r < st.runs.size(); ++r) out.row({std::to_string(r + 1), format_number(st.runs[r])});
  out.close();
  CsvWriter sum(out_path(g, "evaluate_summary.csv"), header(cfg), {"samples", "repeats", "mean", "std"});
  sum.row({std::to_string(n), std::to_string(a.repeats), format_number(st.mean), format_number(st.std)});
  sum.close();
  spdlog::info("test accuracy {:.2f}% +- {:.2f}", st.mean, st.std);
  return 0;
}

int run_sweep(const GlobalOptions& g, const SweepArgs& a) {
  ExperimentConfig cfg = resolve_config(g);
  cfg.sweep.axis = parse_sweep_axis(a.axis);
  if (!a.values.empty()) cfg.sweep.values = a.values;
  if (!a.seeds.empty()) cfg.sweep.seeds = a.seeds;
  else if (g.seed) cfg.sweep.seeds = {*g.seed};
  if (g.rule) cfg.sweep.rules = {parse_rule(*g.rule)};
  // Sweeps only need final-iteration metrics.
  cfg.training.evaluate_every = 0;
  cfg.validate();

  const auto train_set = load_split(cfg, Split::kTrain);
  const auto test_set = load_split(cfg, Split::kTest);
  SweepSpec spec{cfg.sweep.axis, cfg.sweep.values, cfg.sweep.rules, cfg.sweep.seeds, cfg.jobs};
  const auto cells = run_sweep(cfg.network, spec, train_set.samples, test_set.samples, cfg.train_options(),
                               [](const SweepCell& c) {
                                 if (!c.error.empty()) {
                                   spdlog::warn("{} {} seed {}: failed: {}", to_string(c.rule), c.value, c.seed,
                                                c.error);
                                   return;
                                 }
                                 spdlog::info("{} {} seed {}: BG {:.4f} gen {:.2f} test {:.2f}", to_string(c.rule),
                                              c.value, c.seed, c.bg_index, c.generalization_error, c.testing_accuracy);
                               });
  CsvWriter out(out_path(g, "sweep_" + to_string(cfg.sweep.axis) + ".csv"), header(cfg),
                {"rule", to_string(cfg.sweep.axis), "seed", "bg_index", "gen_err", "test_acc", "train_acc",
                 "train_loss", "status"});
  for (const auto& c : cells)
    out.row({std::string(to_string(c.rule)), format_number(c.value), std::to_string(c.seed), format_number(c.bg_index),
             format_number(c.generalization_error), format_number(c.testing_accuracy),
             format_number(c.training_accuracy), format_number(c.training_loss), c.error.empty() ? "ok" : "failed"});
  out.close();
  return 0;
}

int run_calibrate(const GlobalOptions& g, const CalibrateArgs& a) {
  ExperimentConfig cfg = resolve_config(g);
  if (a.duration_ms) cfg.calibration.duration_ms = *a.duration_ms;
  cfg.validate();
  std::vector<StdpRule> rules{StdpRule::kAdd, StdpRule::kMult, StdpRule::kLog};
  if (g.rule) rules = {parse_rule(*g.rule)};

  const std::string h = header(cfg);
  CsvWriter weights(out_path(g, "calibration_weights.csv"), h, {"rule", "synapse", "pool", "weight"});
  CsvWriter kde(out_path(g, "calibration_kde.csv"), h, {"rule", "w", "density"});
  CsvWriter summary(out_path(g, "calibration_summary.csv"), h,
                    {"rule", "near_bounds", "kde_modes", "skewness", "mean", "output_rate_hz", "bandwidth"});
  for (auto rule : rules) {
    const auto cc = cfg.calibration.to_config(rule, cfg.network.seed);
    const auto r = calibration_pools(cc);
    const std::string name(to_string(rule));
    for (std::size_t i = 0; i < r.weights.size(); ++i)
      weights.row({name, std::to_string(i), std::to_string(i / cc.per_pool), format_number(r.weights[i])});
    for (std::size_t k = 0; k < r.kde.x.size(); ++k)
      kde.row({name, format_number(r.kde.x[k]), format_number(r.kde.density[k])});
    double mean = 0.0;
    for (double w : r.weights) mean += w / static_cast<double>(r.weights.size());
    const double rate = static_cast<double>(r.output_spikes) / (cc.duration_ms / 1000.0);
    summary.row({name, format_number(fraction_near_bounds(r.weights, cc.stdp.w_min, cc.stdp.w_max)),
                 std::to_string(count_modes(r.kde.density)), format_number(skewness(r.weights)), format_number(mean),
                 format_number(rate), format_number(r.bandwidth)});
    spdlog::info("{}: output {:.1f} Hz, skewness {:.3f}", name, rate, skewness(r.weights));
  }
  weights.close();
  kde.close();
  summary.close();
  return 0;
}

int run_levy_demo(const GlobalOptions& g, const LevyArgs& a) {
  const std::uint64_t seed = g.seed.value_or(1);
  OuLevyParams p;
  p.alpha = a.alpha;
  p.steps = a.steps;
  p.dims = a.dims;
  p.drift_rate = a.drift;
  p.scale = a.scale;
  p.dt = a.dt;
  if (a.grid < 2) throw InvalidArgument("--grid must be >= 2");
  Rng rng = make_rng(seed, {stream::kEncoding});
  const auto traj = simulate_ou_levy(p, rng);

  std::ostringstream cfg;
  cfg << "{alpha: " << format_number(p.alpha) << ", steps: " << p.steps << ", dims: " << p.dims
      << ", drift: " << format_number(p.drift_rate) << ", scale: " << format_number(p.scale)
      << ", dt: " << format_number(p.dt) << ", grid: " << a.grid << "}";
  const std::string h = output_header(seed, cfg.str());

  std::vector<std::string> cols{"step"};
  for (std::size_t d = 0; d < p.dims; ++d) cols.push_back("x" + std::to_string(d));
  CsvWriter out(out_path(g, "levy_trajectory.csv"), h, cols);
  for (std::size_t k = 0; k < traj.steps; ++k) {
    std::vector<std::string> row{std::to_string(k)};
    for (std::size_t d = 0; d < p.dims; ++d) row.push_back(format_number(traj.at(k, d)));
    out.row(row);
  }
  out.close();

  std::vector<double> inc;
  for (std::size_t d = 0; d < p.dims; ++d) {
    const auto v = traj.increments(d);
    inc.insert(inc.end(), v.begin(), v.end());
  }
  CsvWriter pdf(out_path(g, "levy_pdf.csv"), h, {"x", "density"});
  if (inc.size() >= 2) {
    const double lo = quantile(inc, 0.005);
    const double hi = quantile(inc, 0.995);
    if (hi > lo) {
      const auto grid = kde_grid(inc, kde_bandwidth(inc), lo, hi, a.grid);
      for (std::size_t k = 0; k < grid.x.size(); ++k) pdf.row(std::vector<double>{grid.x[k], grid.density[k]});
    }
    if (inc.size() >= 8) spdlog::info("alpha_hat of increments: {:.4f}", estimate_tail_index(inc));
  }
  pdf.close();
  return 0;
}

namespace {

bool parse_double(const std::string& s, double& out) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return false;
  const auto e = s.find_last_not_of(" \t\r\"");
  const std::string t = s.substr(b, e - b + 1);
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == '\t' || c == ' ') {
      if (!cur.empty()) cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) cells.push_back(cur);
  return cells;
}

}  // namespace

int run_estimate_alpha(const GlobalOptions& g, const EstimateArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + a.input);
  std::vector<double> samples;
  std::string line;
  std::optional<std::size_t> col;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_row(line);
    if (cells.empty()) continue;
    double v = 0.0;
    if (first) {
      first = false;
      bool header_row = false;
      for (const auto& c : cells) header_row |= !parse_double(c, v);
      if (header_row) {
        if (a.column.empty()) {
          col = cells.size() - 1;
        } else {
          const auto it = std::find(cells.begin(), cells.end(), a.column);
          if (it != cells.end()) col = static_cast<std::size_t>(it - cells.begin());
          else if (parse_double(a.column, v)) col = static_cast<std::size_t>(v);
          else throw InvalidArgument("column '" + a.column + "' not found in " + a.input);
        }
        continue;
      }
    }
    if (!col) col = a.column.empty() ? cells.size() - 1 : static_cast<std::size_t>(std::stoul(a.column));
    if (*col >= cells.size() || !parse_double(cells[*col], v))
      throw Error(ErrorCode::kDataFormat, a.input + ":" + std::to_string(lineno) + ": no number in the selected column");
    samples.push_back(v);
  }
  const double alpha = estimate_tail_index(samples, a.k1);
  const std::size_t k1 = a.k1 ? a.k1 : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(samples.size()))));
  const std::string cfg = "{input: \"" + a.input + "\", column: \"" + a.column + "\", k1: " + std::to_string(a.k1) + "}";
  CsvWriter out(out_path(g, "alpha.csv"), output_header(g.seed.value_or(1), cfg), {"n", "k1", "alpha_hat"});
  out.row({std::to_string(samples.size()), std::to_string(k1), format_number(alpha)});
  out.close();
  spdlog::info("alpha_hat = {:.4f} from {} samples", alpha, samples.size());
  return 0;
}

int run_optimize(const GlobalOptions& g, const OptimizeArgs& a) {
  ExperimentConfig cfg = resolve_config(g);
  if (a.budget) cfg.bo.budget = *a.budget;
  if (a.initial) cfg.bo.initial_points = *a.initial;
  if (a.k_folds) cfg.bo.k_folds = *a.k_folds;
  cfg.training.evaluate_every = 0;
  cfg.validate();

  const auto train_set = load_split(cfg, Split::kTrain);
  const auto test_set = load_split(cfg, Split::kTest);
  FoldObjectiveOptions fo;
  fo.k_folds = cfg.bo.k_folds;
  fo.train = cfg.train_options();
  const auto objective = make_bg_objective(cfg.network, cfg.bo.space, train_set.samples, test_set.samples, fo);

  BoOptions bo;
  bo.budget = cfg.bo.budget;
  bo.initial_points = cfg.bo.initial_points;
  bo.jobs = cfg.jobs;
  bo.propose.candidates = cfg.bo.candidates;
  bo.seed = cfg.network.seed;

  std::ofstream log(out_path(g, "trials.jsonl"));
  if (!log) throw Error(ErrorCode::kIo, "cannot write trials.jsonl");
  const auto res = optimize(objective, cfg.bo.space, bo, [&](const Trial& t) {
    append_trial(log, t);
    spdlog::info("trial {} ({}): objective {:.4f}", t.index, to_string(t.status), t.objective);
  });

  const std::string h = header(cfg);
  CsvWriter prog(out_path(g, "bo_progress.csv"), h,
                 {"evaluation", "status", "objective", "best_so_far", "train_acc", "test_acc", "gen_err"});
  for (std::size_t i = 0; i < res.history.size(); ++i) {
    const auto& t = res.history[i];
    prog.row({std::to_string(i + 1), to_string(t.status), format_number(t.objective), format_number(res.best_so_far[i]),
              format_number(t.training_accuracy), format_number(t.testing_accuracy),
              format_number(t.generalization_error)});
  }
  prog.close();
  CsvWriter best(out_path(g, "bo_best.csv"), h, {"parameter", "value"});
  for (std::size_t i = 0; i < res.best.params.size(); ++i)
    best.row({res.best.names[i], format_number(res.best.params[i])});
  best.row({"objective", format_number(res.best.objective)});
  best.close();
  return 0;
}

}  // namespace stdpgen::cli
