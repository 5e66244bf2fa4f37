#include "stdpgen/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stdpgen/errors.hpp"

namespace stdpgen {

std::string_view to_string(StdpRule rule) noexcept {
  switch (rule) {
    case StdpRule::kLog: return "log";
    case StdpRule::kAdd: return "add";
    case StdpRule::kMult: return "mult";
  }
  return "?";
}

StdpRule parse_rule(std::string_view name) {
  if (name == "log") return StdpRule::kLog;
  if (name == "add") return StdpRule::kAdd;
  if (name == "mult") return StdpRule::kMult;
  throw InvalidArgument("unknown STDP rule '" + std::string(name) + "' (expected log, add or mult)");
}

StdpConfig StdpConfig::defaults(StdpRule rule) {
  StdpConfig cfg;
  cfg.rule = rule;
  switch (rule) {
    case StdpRule::kLog:
      cfg.c_plus = 1.0;
      cfg.c_minus = 0.5;
      break;
    case StdpRule::kAdd:
      cfg.c_plus = 1.0;
      cfg.c_minus = 0.6;
      break;
    case StdpRule::kMult:
      cfg.c_plus = 1.0;
      cfg.c_minus = 2.0;
      cfg.w0 = 0.25;
      break;
  }
  return cfg;
}

void StdpConfig::validate() const {
  auto require = [](bool ok, const char* key, const char* msg) {
    if (!ok) throw ConfigError(msg, key);
  };
  require(eta > 0, "eta", "must be > 0");
  require(sigma >= 0, "sigma", "must be >= 0");
  require(c_plus > 0, "c_plus", "must be > 0");
  require(c_minus > 0, "c_minus", "must be > 0");
  require(tau_plus > 0, "tau_plus", "must be > 0");
  require(tau_minus > 0, "tau_minus", "must be > 0");
  require(w_min < w_max, "w_max", "must exceed w_min");
  require(pre_increment > 0, "pre_increment", "must be > 0");
  require(post_increment > 0, "post_increment", "must be > 0");
  if (rule == StdpRule::kLog) {
    require(s_sat >= 1, "s_sat", "must be >= 1");
    require(gamma_decay >= 1, "gamma_decay", "must be >= 1");
    require(w0 > 0, "w0", "must be > 0");
  }
}

StdpConfig switch_rule(const StdpConfig& cfg, StdpRule rule) {
  StdpConfig s = cfg;
  s.rule = rule;
  const bool from_mult = cfg.rule == StdpRule::kMult;
  const bool to_mult = rule == StdpRule::kMult;
  if (from_mult && !to_mult) s.c_minus = cfg.c_minus * cfg.w0;
  if (!from_mult && to_mult) s.c_minus = cfg.c_minus / cfg.w0;
  return s;
}

double a_plus(const StdpConfig& cfg, double w) noexcept {
  if (cfg.rule == StdpRule::kLog) return cfg.c_plus * std::exp(-w / (cfg.w0 * cfg.gamma_decay));
  return cfg.c_plus;
}

double a_minus(const StdpConfig& cfg, double w) noexcept {
  switch (cfg.rule) {
    case StdpRule::kLog: {
      const double r = w / cfg.w0;
      if (r <= 1.0) return cfg.c_minus * r;
      // 1 + S (r - 1) > 1 for r > 1, so the logarithm is always defined.
      return cfg.c_minus * (1.0 + std::log1p(cfg.s_sat * (r - 1.0)) / cfg.s_sat);
    }
    case StdpRule::kMult: return cfg.c_minus * w;
    case StdpRule::kAdd: return cfg.c_minus;
  }
  return 0.0;
}

double window_h(const StdpConfig& cfg, double w, double u) noexcept {
  if (u < 0) return a_plus(cfg, w) * std::exp(u / cfg.tau_plus);
  if (u > 0) return -a_minus(cfg, w) * std::exp(-u / cfg.tau_minus);
  return 0.0;
}

namespace {
// Multiplicative noise (1 + zeta); one instance per update sweep so the
// distribution's cached second variate is not thrown away.
class NoiseFactor {
 public:
  NoiseFactor(double sigma, Rng& rng) : sigma_(sigma), rng_(rng), zeta_(0.0, sigma > 0 ? sigma : 1.0) {}
  double operator()() { return sigma_ == 0.0 ? 1.0 : 1.0 + zeta_(rng_); }

 private:
  double sigma_;
  Rng& rng_;
  std::normal_distribution<double> zeta_;
};

void apply(double& w, double raw, const StdpConfig& cfg, std::size_t pre, std::size_t post, UpdateSink* sink) {
  const double before = w;
  w = std::clamp(w + raw, cfg.w_min, cfg.w_max);
  if (sink != nullptr && w != before) sink->record(pre, post, w - before);
}
}  // namespace

double delta_w(const StdpConfig& cfg, double w, double u, Rng& rng) {
  const double h = window_h(cfg, w, u);
  if (h == 0.0) return 0.0;
  return cfg.eta * NoiseFactor(cfg.sigma, rng)() * h;
}

TraceState::TraceState(std::size_t n_pre, std::size_t n_post, double tau_plus, double tau_minus)
    : pre_(n_pre, 0.0), post_(n_post, 0.0), tau_plus_(tau_plus), tau_minus_(tau_minus) {}

namespace {
constexpr double kTraceFlush = 1e-30;
}

void TraceState::advance_to(double now) {
  if (now < time_) {
    throw InvalidArgument("trace time regression: " + std::to_string(now) + " < " + std::to_string(time_));
  }
  const double dt = now - time_;
  if (dt == 0.0) return;
  if (dt != cached_dt_) {
    cached_dt_ = dt;
    cached_pre_decay_ = std::exp(-dt / tau_plus_);
    cached_post_decay_ = std::exp(-dt / tau_minus_);
  }
  // Flushing tiny values keeps long-decayed traces out of the subnormal range,
  // which is an order of magnitude slower on x86.
  for (auto& x : pre_) x = x > kTraceFlush ? x * cached_pre_decay_ : 0.0;
  for (auto& x : post_) x = x > kTraceFlush ? x * cached_post_decay_ : 0.0;
  time_ = now;
}

void depress_on_pre(const TraceState& traces, WeightMatrix& weights, const StdpConfig& cfg, std::size_t pre,
                    Rng& rng, const TraceUpdateOptions& opts) {
  auto row = weights.row(pre);
  const auto post = traces.post();
  NoiseFactor noise(cfg.sigma, rng);
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double x = post[j];
    if (x <= opts.trace_floor) continue;
    const double raw = -cfg.eta * noise() * a_minus(cfg, row[j]) * x;
    apply(row[j], raw, cfg, pre, j, opts.sink);
  }
}

void potentiate_on_post(const TraceState& traces, WeightMatrix& weights, const StdpConfig& cfg,
                        std::size_t post, Rng& rng, const TraceUpdateOptions& opts) {
  const auto pre = traces.pre();
  NoiseFactor noise(cfg.sigma, rng);
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const double x = pre[i];
    if (x <= opts.trace_floor) continue;
    double& w = weights(i, post);
    const double raw = cfg.eta * noise() * a_plus(cfg, w) * x;
    apply(w, raw, cfg, i, post, opts.sink);
  }
}

void on_pre_spike(TraceState& traces, WeightMatrix& weights, const StdpConfig& cfg,
                  std::span<const std::size_t> pre, double now, Rng& rng, const TraceUpdateOptions& opts) {
  traces.advance_to(now);
  for (auto i : pre) depress_on_pre(traces, weights, cfg, i, rng, opts);
  for (auto i : pre) traces.bump_pre(i, cfg.pre_increment);
}

void on_post_spike(TraceState& traces, WeightMatrix& weights, const StdpConfig& cfg, std::size_t post,
                   double now, Rng& rng, const TraceUpdateOptions& opts) {
  traces.advance_to(now);
  potentiate_on_post(traces, weights, cfg, post, rng, opts);
  traces.bump_post(post, cfg.post_increment);
}

}  // namespace stdpgen
