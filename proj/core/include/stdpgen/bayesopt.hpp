#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stdpgen/gaussian_process.hpp"
#include "stdpgen/harness.hpp"
#include "stdpgen/search_space.hpp"

namespace stdpgen {

enum class TrialStatus { kOk, kFailed };

std::string to_string(TrialStatus s);
TrialStatus parse_trial_status(const std::string& s);

struct Trial {
  std::size_t index = 0;
  std::vector<std::string> names;
  ParamVector params;
  /// Mean of fold_objectives; NaN for failed trials.
  double objective = 0.0;
  std::vector<double> fold_objectives;
  double training_accuracy = 0.0;
  double testing_accuracy = 0.0;
  double generalization_error = 0.0;
  TrialStatus status = TrialStatus::kOk;
  std::string error;
  bool initial_design = false;
  std::string started_at;
  std::string finished_at;

  bool operator==(const Trial&) const = default;
};

/// Result of one functional evaluation.
struct ObjectiveResult {
  /// Objective value per fold; the trial objective is their mean.
  std::vector<double> folds;
  double training_accuracy = 0.0;
  double testing_accuracy = 0.0;
  double generalization_error = 0.0;
};

/// Evaluates parameters `x`; `seed` is distinct per trial. Throwing a
/// stdpgen::Error marks the trial failed.
using Objective = std::function<ObjectiveResult(const ParamVector& x, std::uint64_t seed)>;

/// Latin hypercube: every coordinate is split into n equal bins with one
/// point per bin; integer coordinates are rounded.
std::vector<ParamVector> initial_design(const SearchSpace& space, std::size_t n, Rng& rng);

struct ProposeOptions {
  std::size_t candidates = 4096;
  /// Rounds of coordinate refinement around the best candidate.
  std::size_t refine_rounds = 4;
};

/// Surrogate trained on unit-cube coordinates. Returns the EI maximiser (in
/// parameter space) among random candidates refined coordinate-wise.
ParamVector propose_next(const GaussianProcess& gp, const SearchSpace& space, double f_min, Rng& rng,
                         const ProposeOptions& opts = {});

/// Fits the surrogate on successful trials; failed ones get worst + 1 sd.
GaussianProcess fit_surrogate(const SearchSpace& space, std::span<const Trial> trials, Rng& rng,
                              const GpFitOptions& opts = {});

struct BoOptions {
  std::size_t budget = 30;
  std::size_t initial_points = 8;
  std::size_t jobs = 1;
  ProposeOptions propose{};
  GpFitOptions gp{};
  std::uint64_t seed = 1;
};

struct BoResult {
  Trial best;
  std::vector<Trial> history;
  /// Best successful objective after each trial (NaN until the first success).
  std::vector<double> best_so_far;
};

/// Initial design followed by fit -> propose -> evaluate until the budget is
/// spent. Throws InvalidArgument when budget < initial_points and
/// OptimizationError when every trial fails.
BoResult optimize(const Objective& objective, const SearchSpace& space, const BoOptions& opts,
                  const std::function<void(const Trial&)>& on_trial = {});

/// Uniform random search over the same space with the same bookkeeping.
BoResult random_search(const Objective& objective, const SearchSpace& space, std::size_t budget, std::uint64_t seed);

/// Best-so-far curve of a history.
std::vector<double> best_so_far(std::span<const Trial> history);

struct FoldObjectiveOptions {
  std::size_t k_folds = 2;
  TrainOptions train{};
};

/// BG-index objective: the training set is split into k disjoint folds and a
/// network trained on each; the fold objective is its final BG index. Side
/// metrics are averaged over folds.
Objective make_bg_objective(const NetworkConfig& base, const SearchSpace& space,
                            std::span<const ImageSample> train_set, std::span<const ImageSample> test_set,
                            const FoldObjectiveOptions& opts);

}  // namespace stdpgen
