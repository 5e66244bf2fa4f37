#include "stdpgen/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "stdpgen/errors.hpp"
#include "stdpgen/rng.hpp"

namespace stdpgen {

CalibrationConfig CalibrationConfig::defaults(StdpRule rule) {
  CalibrationConfig c;
  c.stdp = StdpConfig::defaults(rule);
  c.stdp.eta = 0.01;
  c.stdp.w0 = 0.25;
  if (rule == StdpRule::kLog) c.stdp.c_minus = 0.5;
  if (rule == StdpRule::kMult) c.stdp.c_minus = 0.5 / c.stdp.w0;
  c.neuron = NeuronParams::excitatory();
  c.neuron.tau_mem = 20.0;
  c.neuron.theta_plus = 0.0;
  return c;
}

void CalibrationConfig::validate() const {
  stdp.validate();
  neuron.validate();
  if (pools == 0 || per_pool == 0) throw ConfigError("pools and per_pool must be >= 1", "pools");
  if (!(rate_hz >= 0.0)) throw ConfigError("rate_hz must be >= 0", "rate_hz");
  if (!(correlation >= 0.0 && correlation <= 1.0)) throw ConfigError("correlation must lie in [0, 1]", "correlation");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0", "dt");
  if (!(duration_ms >= 0.0)) throw ConfigError("duration_ms must be >= 0", "duration_ms");
  if (!(input_gain > 0.0)) throw ConfigError("input_gain must be > 0", "input_gain");
  if (w_init < stdp.w_min || w_init > stdp.w_max) throw ConfigError("w_init outside weight bounds", "w_init");
  if (kde_points < 2) throw ConfigError("kde_points must be >= 2", "kde_points");
}

CalibrationResult calibration_pools(const CalibrationConfig& cfg) {
  cfg.validate();
  const std::size_t n_in = cfg.pools * cfg.per_pool;
  Rng rng = make_rng(derive_seed(cfg.seed, {stream::kCalibration}));
  Rng noise = make_rng(derive_seed(cfg.seed, {stream::kPlasticityNoise}));

  WeightMatrix w(n_in, 1, cfg.w_init);
  TraceState traces(n_in, 1, cfg.stdp.tau_plus, cfg.stdp.tau_minus);
  NeuronPopulation cell(1, cfg.neuron);

  const double p = std::min(1.0, cfg.rate_hz * cfg.dt / 1000.0);
  const double p_shared = cfg.correlation;
  const double p_own = p * (1.0 - cfg.correlation);
  std::bernoulli_distribution driver(p);
  std::bernoulli_distribution copy(p_shared);
  std::bernoulli_distribution own(p_own);

  CalibrationResult res;
  std::vector<std::size_t> fired;
  std::vector<std::size_t> spiked;
  const auto steps = static_cast<std::uint64_t>(std::llround(cfg.duration_ms / cfg.dt));
  for (std::uint64_t s = 1; s <= steps; ++s) {
    const double now = static_cast<double>(s) * cfg.dt;
    traces.advance_to(now);
    integrate_step(cell, cfg.neuron, cfg.dt, now, spiked);

    fired.clear();
    for (std::size_t k = 0; k < cfg.pools; ++k) {
      const bool common = driver(rng);
      for (std::size_t i = k * cfg.per_pool; i < (k + 1) * cfg.per_pool; ++i)
        if ((common && copy(rng)) || own(rng)) fired.push_back(i);
    }
    for (auto i : fired) {
      cell.g_e[0] += cfg.input_gain * w(i, 0);
      depress_on_pre(traces, w, cfg.stdp, i, noise);
    }
    if (!spiked.empty()) {
      potentiate_on_post(traces, w, cfg.stdp, 0, noise);
      ++res.output_spikes;
    }
    for (auto i : fired) traces.bump_pre(i, cfg.stdp.pre_increment);
    if (!spiked.empty()) traces.bump_post(0, cfg.stdp.post_increment);
  }

  res.weights.assign(w.values().begin(), w.values().end());
  res.bandwidth = kde_bandwidth(res.weights);
  res.kde = kde_grid(res.weights, res.bandwidth, cfg.stdp.w_min, cfg.stdp.w_max, cfg.kde_points);
  return res;
}

double fraction_near_bounds(const std::vector<double>& weights, double w_min, double w_max) {
  if (weights.empty()) return 0.0;
  const double margin = 0.1 * (w_max - w_min);
  const auto near = std::count_if(weights.begin(), weights.end(),
                                  [&](double x) { return x <= w_min + margin || x >= w_max - margin; });
  return static_cast<double>(near) / static_cast<double>(weights.size());
}

}  // namespace stdpgen
