#include "stdpgen/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "stdpgen/errors.hpp"

namespace stdpgen {

std::string to_string(SweepAxis axis) { return axis == SweepAxis::kSfr ? "sfr" : "eta"; }

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "sfr") return SweepAxis::kSfr;
  if (s == "eta") return SweepAxis::kEta;
  throw InvalidArgument("unknown sweep axis '" + s + "' (expected sfr or eta)");
}

std::vector<double> default_axis_values(SweepAxis axis) {
  if (axis == SweepAxis::kSfr) return {0.9, 1.2, 1.7, 2.1};
  return {0.05, 0.1, 0.15, 0.2};
}

StdpConfig sweep_cell_stdp(const StdpConfig& base, StdpRule rule, SweepAxis axis, double value) {
  StdpConfig s = switch_rule(base, rule);
  const double c_minus = switch_rule(base, StdpRule::kLog).c_minus;
  if (axis == SweepAxis::kSfr) {
    s.c_plus = value * c_minus;
  } else {
    s.eta = value;
  }
  return s;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<SweepCell> run_sweep(const NetworkConfig& base, const SweepSpec& spec,
                                 std::span<const ImageSample> train_set, std::span<const ImageSample> test_set,
                                 const TrainOptions& opts, const std::function<void(const SweepCell&)>& on_cell) {
  const auto values = spec.values.empty() ? default_axis_values(spec.axis) : spec.values;
  if (spec.rules.empty() || spec.seeds.empty()) throw InvalidArgument("sweep needs at least one rule and one seed");

  std::vector<SweepCell> cells;
  for (auto seed : spec.seeds)
    for (auto rule : spec.rules)
      for (double v : values) {
        SweepCell c;
        c.rule = rule;
        c.value = v;
        c.seed = seed;
        cells.push_back(c);
      }

  // Validate every cell before spending time on training.
  std::vector<NetworkConfig> cfgs;
  for (const auto& c : cells) {
    NetworkConfig cfg = base;
    cfg.stdp = sweep_cell_stdp(base.stdp, c.rule, spec.axis, c.value);
    cfg.seed = c.seed;
    cfg.validate();
    cfgs.push_back(cfg);
  }

  TrainOptions cell_opts = opts;
  cell_opts.on_metrics = nullptr;
  std::mutex mu;
  parallel_for(cells.size(), spec.jobs, [&](std::size_t i) {
    SweepCell& c = cells[i];
    try {
      const auto res = train(cfgs[i], train_set, test_set, cell_opts);
      if (!res.metrics.empty()) {
        const Metrics& m = res.metrics.back();
        c.bg_index = m.bg_index.value_or(kNaN);
        c.generalization_error = m.generalization_error;
        c.training_accuracy = m.training_accuracy;
        c.testing_accuracy = m.testing_accuracy;
        c.training_loss = m.training_loss;
      }
    } catch (const Error& e) {
      c.bg_index = c.generalization_error = c.training_accuracy = c.testing_accuracy = c.training_loss = kNaN;
      c.error = e.what();
    }
    if (on_cell) {
      std::lock_guard lock(mu);
      on_cell(c);
    }
  });
  return cells;
}

namespace {
std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = rank;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman needs two equal-length series (n >= 2)");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace stdpgen
