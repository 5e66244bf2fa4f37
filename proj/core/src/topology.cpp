#include "stdpgen/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stdpgen/errors.hpp"

namespace stdpgen {

StdpConfig network_stdp_defaults(StdpRule rule) {
  StdpConfig s;
  s.rule = rule;
  s.eta = 0.1;
  s.sigma = 0.5;
  s.s_sat = 3.0;
  s.gamma_decay = 45.0;
  s.w0 = 0.5;
  s.tau_plus = 15.0;
  s.tau_minus = 30.0;
  s.c_plus = 0.5;
  s.c_minus = 0.05;
  if (rule == StdpRule::kMult) s.c_minus /= s.w0;
  return s;
}

void NetworkConfig::validate() const {
  auto require = [](bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigError(msg, key);
  };
  require(n_input > 0, "n_input", "must be > 0");
  require(n_exc > 0, "n_exc", "must be > 0");
  require(n_inh == n_exc, "n_inh", "must equal n_exc");
  require(w_exc_inh > 0, "w_exc_inh", "must be > 0");
  require(w_inh_exc > 0, "w_inh_exc", "must be > 0");
  require(w_init_low <= w_init_high, "w_init_high", "must be >= w_init_low");
  require(w_init_low >= stdp.w_min, "w_init_low", "must lie within the STDP weight bounds");
  require(w_init_high <= stdp.w_max, "w_init_high", "must lie within the STDP weight bounds");
  require(input_weight_sum >= 0, "input_weight_sum", "must be >= 0");
  require(dt > 0, "dt", "must be > 0");
  require(dt <= exc.tau_ge && dt <= inh.tau_ge, "dt", "must not exceed tau_ge");
  require(synaptic_delay >= 0, "synaptic_delay", "must be >= 0");
  require(trace_floor >= 0, "trace_floor", "must be >= 0");
  stdp.validate();
  exc.validate();
  inh.validate();
}

Network::Network(const NetworkConfig& cfg)
    : cfg_(cfg),
      w_in_(cfg.n_input, cfg.n_exc),
      traces_(cfg.n_input, cfg.n_exc, cfg.stdp.tau_plus, cfg.stdp.tau_minus),
      exc_(cfg.n_exc, cfg.exc),
      inh_(cfg.n_inh, cfg.inh),
      noise_rng_(make_rng(cfg.seed, {stream::kPlasticityNoise})) {
  cfg_.validate();
  exc_frozen_ = cfg_.exc;
  exc_frozen_.theta_plus = 0.0;
  exc_frozen_.tau_theta = std::numeric_limits<double>::infinity();

  Rng init = make_rng(cfg.seed, {stream::kWeightInit});
  std::uniform_real_distribution<double> u(cfg.w_init_low, cfg.w_init_high);
  for (auto& w : w_in_.values()) w = cfg.w_init_low == cfg.w_init_high ? cfg.w_init_low : u(init);

  delay_steps_ = static_cast<std::size_t>(std::llround(cfg.synaptic_delay / cfg.dt));
  delay_ring_.assign(delay_steps_ + 1, {});
}

void Network::set_stdp(const StdpConfig& stdp) {
  stdp.validate();
  if (stdp.tau_plus != cfg_.stdp.tau_plus || stdp.tau_minus != cfg_.stdp.tau_minus) {
    const double t = traces_.time();
    traces_ = TraceState(cfg_.n_input, cfg_.n_exc, stdp.tau_plus, stdp.tau_minus);
    traces_.advance_to(t);
  }
  cfg_.stdp = stdp;
}

std::vector<std::size_t> Network::inhibitory_targets(std::size_t inh) const {
  if (inh >= cfg_.n_inh) throw InvalidArgument("inhibitory index out of range");
  std::vector<std::size_t> out;
  out.reserve(cfg_.n_exc - 1);
  for (std::size_t k = 0; k < cfg_.n_exc; ++k)
    if (k != inh) out.push_back(k);
  return out;
}

void Network::step(const SpikeSchedule* schedule, std::size_t& cursor, std::uint64_t start_step, bool learn,
                   bool adapt_theta, UpdateSink* sink, std::vector<std::uint32_t>* counts) {
  const std::uint64_t s = ++step_;
  const double now = static_cast<double>(s) * cfg_.dt;
  const std::size_t ring = delay_ring_.size();

  // Inputs in bin k of the presentation are emitted at the end of the bin.
  if (schedule != nullptr) {
    auto& slot = delay_ring_[(s + delay_steps_) % ring];
    while (cursor < schedule->size()) {
      const auto& sp = (*schedule)[cursor];
      const auto bin = static_cast<std::uint64_t>(std::floor(sp.time_ms / cfg_.dt));
      if (start_step + bin + 1 != s) break;
      slot.push_back(sp.input);
      ++cursor;
    }
  }

  traces_.advance_to(now);
  integrate_step(exc_, adapt_theta ? cfg_.exc : exc_frozen_, cfg_.dt, now, exc_spiked_);
  integrate_step(inh_, cfg_.inh, cfg_.dt, now, inh_spiked_);

  auto& arrivals = delay_ring_[s % ring];
  const std::size_t n_exc = cfg_.n_exc;
  double* ge = exc_.g_e.data();
  for (auto i : arrivals) {
    const double* w = w_in_.row(i).data();
    for (std::size_t j = 0; j < n_exc; ++j) ge[j] += w[j];
  }

  if (learn) {
    const TraceUpdateOptions opts{cfg_.trace_floor, sink};
    for (auto i : arrivals) depress_on_pre(traces_, w_in_, cfg_.stdp, i, noise_rng_, opts);
    for (auto j : exc_spiked_) potentiate_on_post(traces_, w_in_, cfg_.stdp, j, noise_rng_, opts);
  }
  for (auto i : arrivals) traces_.bump_pre(i, cfg_.stdp.pre_increment);
  for (auto j : exc_spiked_) traces_.bump_post(j, cfg_.stdp.post_increment);
  arrivals.clear();

  for (auto j : exc_spiked_) inh_.g_e[j] += cfg_.w_exc_inh;
  if (!inh_spiked_.empty()) {
    const double total = cfg_.w_inh_exc * static_cast<double>(inh_spiked_.size());
    for (std::size_t k = 0; k < n_exc; ++k) exc_.g_i[k] += total;
    for (auto j : inh_spiked_) exc_.g_i[j] -= cfg_.w_inh_exc;
  }

  if (counts != nullptr)
    for (auto j : exc_spiked_) ++(*counts)[j];
}

void Network::normalize_input_weights() {
  const double target = cfg_.input_weight_sum;
  std::vector<double> col_sum(cfg_.n_exc, 0.0);
  for (std::size_t i = 0; i < cfg_.n_input; ++i) {
    const auto row = w_in_.row(i);
    for (std::size_t j = 0; j < cfg_.n_exc; ++j) col_sum[j] += row[j];
  }
  for (auto& s : col_sum) s = s > 0 ? target / s : 1.0;
  for (std::size_t i = 0; i < cfg_.n_input; ++i) {
    auto row = w_in_.row(i);
    for (std::size_t j = 0; j < cfg_.n_exc; ++j)
      row[j] = std::clamp(row[j] * col_sum[j], cfg_.stdp.w_min, cfg_.stdp.w_max);
  }
}

PresentationResult Network::present(const SpikeSchedule& schedule, double duration_ms, Plasticity plasticity,
                                    IncrementLog* log) {
  if (duration_ms < 0) throw InvalidArgument("presentation duration must be >= 0");
  for (const auto& sp : schedule) {
    if (!(sp.time_ms >= 0.0 && sp.time_ms < duration_ms))
      throw InvalidArgument("schedule spike at " + std::to_string(sp.time_ms) + " ms outside [0, " +
                            std::to_string(duration_ms) + ")");
    if (sp.input >= cfg_.n_input) throw InvalidArgument("schedule input index out of range");
  }
  if (!std::is_sorted(schedule.begin(), schedule.end(),
                      [](const InputSpike& a, const InputSpike& b) { return a.time_ms < b.time_ms; }))
    throw InvalidArgument("schedule must be sorted by time");

  learning_ = plasticity == Plasticity::kOn;
  UpdateSink* sink = (learning_ && log != nullptr) ? &log->sink(kInputExcGroup) : nullptr;

  PresentationResult result;
  result.exc_counts.assign(cfg_.n_exc, 0);
  const auto steps = static_cast<std::uint64_t>(std::llround(duration_ms / cfg_.dt));
  const std::uint64_t start = step_;
  std::size_t cursor = 0;
  for (std::uint64_t k = 0; k < steps; ++k) step(&schedule, cursor, start, learning_, learning_, sink, &result.exc_counts);
  for (auto c : result.exc_counts) result.total_exc_spikes += c;

  if (learning_ && cfg_.input_weight_sum > 0) normalize_input_weights();
  return result;
}

void Network::rest(double duration_ms) {
  if (duration_ms < 0) throw InvalidArgument("rest duration must be >= 0");
  const auto steps = static_cast<std::uint64_t>(std::llround(duration_ms / cfg_.dt));
  std::size_t cursor = 0;
  for (std::uint64_t k = 0; k < steps; ++k) step(nullptr, cursor, step_, false, learning_, nullptr, nullptr);
}

Network build_network(const NetworkConfig& cfg) { return Network(cfg); }

PresentationResult run_presentation(Network& net, const SpikeSchedule& schedule, double duration_ms,
                                    Plasticity plasticity, IncrementLog* log) {
  return net.present(schedule, duration_ms, plasticity, log);
}

void rest_network(Network& net, double duration_ms) { net.rest(duration_ms); }

bool Network::operator==(const Network& o) const {
  return cfg_ == o.cfg_ && exc_frozen_ == o.exc_frozen_ && w_in_ == o.w_in_ && traces_ == o.traces_ &&
         exc_ == o.exc_ && inh_ == o.inh_ && delay_steps_ == o.delay_steps_ && delay_ring_ == o.delay_ring_ &&
         step_ == o.step_ && learning_ == o.learning_ && noise_rng_ == o.noise_rng_;
}

}  // namespace stdpgen
