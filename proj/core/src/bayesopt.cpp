#include "stdpgen/bayesopt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>

#include "stdpgen/errors.hpp"
#include "stdpgen/sweep.hpp"

namespace stdpgen {

std::string to_string(TrialStatus s) { return s == TrialStatus::kOk ? "ok" : "failed"; }

TrialStatus parse_trial_status(const std::string& s) {
  if (s == "ok") return TrialStatus::kOk;
  if (s == "failed") return TrialStatus::kFailed;
  throw InvalidArgument("unknown trial status '" + s + "'");
}

std::vector<ParamVector> initial_design(const SearchSpace& space, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgument("initial design needs n >= 1");
  const std::size_t d = space.dims();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<ParamVector> unit(n, ParamVector(d));
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = static_cast<double>(perm[i]) / static_cast<double>(n);
      const double hi = static_cast<double>(perm[i] + 1) / static_cast<double>(n);
      const auto& dom = space[j];
      double u = lo + u01(rng) * (hi - lo);
      if (dom.integer && dom.hi > dom.lo) {
        // Pick an integer whose own unit coordinate lies in the bin when one
        // exists, so rounding does not move the point to another stratum.
        const double x_lo = dom.lo + lo * (dom.hi - dom.lo);
        const double x_hi = dom.lo + hi * (dom.hi - dom.lo);
        const double first = std::ceil(std::max(x_lo, dom.min_value()));
        const double last = perm[i] + 1 == n ? std::floor(x_hi) : std::ceil(x_hi) - 1.0;
        if (first <= last) {
          std::uniform_int_distribution<long long> pick(static_cast<long long>(first), static_cast<long long>(last));
          u = (static_cast<double>(pick(rng)) - dom.lo) / (dom.hi - dom.lo);
        }
      }
      unit[i][j] = u;
    }
  }
  std::vector<ParamVector> out;
  out.reserve(n);
  for (const auto& u : unit) out.push_back(space.from_unit(u));
  return out;
}

namespace {

double trial_value_for_fit(const Trial& t, double impute) {
  return t.status == TrialStatus::kOk ? t.objective : impute;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Trial run_trial(const Objective& objective, const SearchSpace& space, const ParamVector& x, std::size_t index,
                std::uint64_t seed, bool design) {
  Trial t;
  t.index = index;
  for (const auto& d : space.domains()) t.names.push_back(d.name);
  t.params = x;
  t.initial_design = design;
  t.started_at = utc_now();
  try {
    const auto r = objective(x, derive_seed(seed, {stream::kBayesOpt, index}));
    if (r.folds.empty()) throw OptimizationError("objective returned no fold values");
    for (double f : r.folds)
      if (!std::isfinite(f)) throw OptimizationError("objective returned a non-finite value");
    t.fold_objectives = r.folds;
    t.objective = std::accumulate(r.folds.begin(), r.folds.end(), 0.0) / static_cast<double>(r.folds.size());
    t.training_accuracy = r.training_accuracy;
    t.testing_accuracy = r.testing_accuracy;
    t.generalization_error = r.generalization_error;
    t.status = TrialStatus::kOk;
  } catch (const Error& e) {
    t.status = TrialStatus::kFailed;
    t.objective = std::numeric_limits<double>::quiet_NaN();
    t.error = e.what();
  }
  t.finished_at = utc_now();
  return t;
}

BoResult finish(std::vector<Trial> history) {
  BoResult res;
  res.best_so_far = best_so_far(history);
  const Trial* best = nullptr;
  for (const auto& t : history)
    if (t.status == TrialStatus::kOk && (!best || t.objective < best->objective)) best = &t;
  if (!best) throw OptimizationError("every trial failed");
  res.best = *best;
  res.history = std::move(history);
  return res;
}

}  // namespace

std::vector<double> best_so_far(std::span<const Trial> history) {
  std::vector<double> out;
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& t : history) {
    if (t.status == TrialStatus::kOk && (std::isnan(best) || t.objective < best)) best = t.objective;
    out.push_back(best);
  }
  return out;
}

GaussianProcess fit_surrogate(const SearchSpace& space, std::span<const Trial> trials, Rng& rng,
                              const GpFitOptions& opts) {
  std::vector<double> ok;
  for (const auto& t : trials)
    if (t.status == TrialStatus::kOk) ok.push_back(t.objective);
  if (ok.size() < 2) throw OptimizationError("surrogate needs at least two successful trials");
  const double n = static_cast<double>(ok.size());
  const double mean = std::accumulate(ok.begin(), ok.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : ok) ss += (v - mean) * (v - mean);
  const double impute = *std::max_element(ok.begin(), ok.end()) + std::sqrt(ss / (n - 1.0));

  std::vector<std::vector<double>> x;
  std::vector<double> y;
  for (const auto& t : trials) {
    x.push_back(space.to_unit(t.params));
    y.push_back(trial_value_for_fit(t, impute));
  }
  return GaussianProcess::fit(std::move(x), std::move(y), rng, opts);
}

ParamVector propose_next(const GaussianProcess& gp, const SearchSpace& space, double f_min, Rng& rng,
                         const ProposeOptions& opts) {
  auto score = [&](const ParamVector& x) { return expected_improvement(gp, space.to_unit(x), f_min); };
  ParamVector best = space.sample_uniform(rng);
  double best_ei = score(best);
  for (std::size_t c = 1; c < opts.candidates; ++c) {
    ParamVector x = space.sample_uniform(rng);
    const double ei = score(x);
    if (ei > best_ei) {
      best_ei = ei;
      best = std::move(x);
    }
  }
  double step = 0.1;
  for (std::size_t round = 0; round < opts.refine_rounds; ++round, step *= 0.5) {
    for (std::size_t j = 0; j < space.dims(); ++j) {
      for (double dir : {-1.0, 1.0}) {
        ParamVector u = space.to_unit(best);
        u[j] = std::clamp(u[j] + dir * step, 0.0, 1.0);
        ParamVector x = space.from_unit(u);
        const double ei = score(x);
        if (ei > best_ei) {
          best_ei = ei;
          best = std::move(x);
        }
      }
    }
  }
  return best;
}

BoResult optimize(const Objective& objective, const SearchSpace& space, const BoOptions& opts,
                  const std::function<void(const Trial&)>& on_trial) {
  if (opts.initial_points == 0) throw InvalidArgument("initial_points must be >= 1");
  if (opts.budget < opts.initial_points) throw InvalidArgument("budget must be >= initial_points");
  Rng rng = make_rng(derive_seed(opts.seed, {stream::kBayesOpt}));

  const auto design = initial_design(space, opts.initial_points, rng);
  std::vector<Trial> history(design.size());
  parallel_for(design.size(), opts.jobs, [&](std::size_t i) {
    history[i] = run_trial(objective, space, design[i], i, opts.seed, true);
  });
  if (on_trial)
    for (const auto& t : history) on_trial(t);

  while (history.size() < opts.budget) {
    ParamVector next;
    std::size_t n_ok = 0;
    double f_min = std::numeric_limits<double>::infinity();
    for (const auto& t : history)
      if (t.status == TrialStatus::kOk) {
        ++n_ok;
        f_min = std::min(f_min, t.objective);
      }
    if (n_ok >= 2) {
      const auto gp = fit_surrogate(space, history, rng, opts.gp);
      next = propose_next(gp, space, f_min, rng, opts.propose);
    } else {
      next = space.sample_uniform(rng);
    }
    history.push_back(run_trial(objective, space, next, history.size(), opts.seed, false));
    if (on_trial) on_trial(history.back());
  }
  return finish(std::move(history));
}

BoResult random_search(const Objective& objective, const SearchSpace& space, std::size_t budget, std::uint64_t seed) {
  if (budget == 0) throw InvalidArgument("budget must be >= 1");
  Rng rng = make_rng(derive_seed(seed, {stream::kBayesOpt, 1u}));
  std::vector<Trial> history;
  for (std::size_t i = 0; i < budget; ++i)
    history.push_back(run_trial(objective, space, space.sample_uniform(rng), i, seed, false));
  return finish(std::move(history));
}

Objective make_bg_objective(const NetworkConfig& base, const SearchSpace& space,
                            std::span<const ImageSample> train_set, std::span<const ImageSample> test_set,
                            const FoldObjectiveOptions& opts) {
  if (opts.k_folds == 0) throw InvalidArgument("k_folds must be >= 1");
  const std::size_t fold_size = train_set.size() / opts.k_folds;
  const std::size_t needed = opts.train.iterations * opts.train.samples_per_iteration;
  if (fold_size < needed)
    throw InvalidArgument("each of " + std::to_string(opts.k_folds) + " folds has " + std::to_string(fold_size) +
                          " samples, training needs " + std::to_string(needed));
  return [=](const ParamVector& x, std::uint64_t seed) {
    NetworkConfig cfg = base;
    apply_params(space, x, cfg.stdp);
    cfg.stdp.validate();
    ObjectiveResult r;
    for (std::size_t k = 0; k < opts.k_folds; ++k) {
      cfg.seed = derive_seed(seed, {stream::kFold, k});
      TrainOptions t = opts.train;
      t.on_metrics = nullptr;
      const auto res = train(cfg, train_set.subspan(k * fold_size, fold_size), test_set, t);
      const Metrics& m = res.metrics.back();
      if (!m.bg_index) throw EstimationError("fold " + std::to_string(k) + " logged too few weight increments");
      r.folds.push_back(*m.bg_index);
      r.training_accuracy += m.training_accuracy / static_cast<double>(opts.k_folds);
      r.testing_accuracy += m.testing_accuracy / static_cast<double>(opts.k_folds);
      r.generalization_error += m.generalization_error / static_cast<double>(opts.k_folds);
    }
    return r;
  };
}

}  // namespace stdpgen
