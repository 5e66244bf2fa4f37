#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "stdpgen/rng.hpp"

namespace stdpgen {

enum class StdpRule { kLog, kAdd, kMult };

std::string_view to_string(StdpRule rule) noexcept;
/// Accepts "log", "add", "mult" (case-sensitive). Throws InvalidArgument.
StdpRule parse_rule(std::string_view name);

/// Hyperparameters of one STDP variant.
///
/// A single pre/post pair at lag u = t_pre - t_post changes the weight by
///   dW = eta * (1 + zeta) * H(W; u),   zeta ~ N(0, sigma^2)
/// where H(W; u) = a_plus(W) exp(-|u|/tau_plus) for u < 0 and
/// -a_minus(W) exp(-|u|/tau_minus) for u > 0. The rule variant selects the
/// weight dependence of a_plus / a_minus; s_sat, gamma_decay and w0 only
/// matter for the log rule (w0 also documents the mult calibration).
///
/// In the trace implementation the pre trace jumps by pre_increment and the
/// post trace by post_increment, so a post->pre pair depresses by
/// eta * post_increment * a_minus(W) * exp(-|u|/tau_minus).
struct StdpConfig {
  StdpRule rule = StdpRule::kLog;
  double eta = 0.0002;
  double sigma = 0.0;
  double c_plus = 1.0;
  double c_minus = 0.5;
  double tau_plus = 17.0;
  double tau_minus = 34.0;
  double s_sat = 5.0;
  double gamma_decay = 50.0;
  double w0 = 0.006;
  double w_min = 0.0;
  double w_max = 1.0;
  double pre_increment = 1.0;
  double post_increment = 1.0;

  /// Reference amplitudes for each rule: log c+=1, c-=0.5; add c+=1, c-=0.6;
  /// mult c+=1, c-=2 (with w0=0.25 so that c- = 0.5 / w0).
  static StdpConfig defaults(StdpRule rule);

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;

  bool operator==(const StdpConfig&) const = default;
};

/// The same settings under another rule. Moving to or from mult rescales
/// c_minus by w0 so that depression at w0 is unchanged.
StdpConfig switch_rule(const StdpConfig& cfg, StdpRule rule);

double a_plus(const StdpConfig& cfg, double w) noexcept;
double a_minus(const StdpConfig& cfg, double w) noexcept;

/// Learning window H(W; u). Returns 0 for u == 0 (simultaneous spikes do not
/// update the synapse).
double window_h(const StdpConfig& cfg, double w, double u) noexcept;

/// eta * (1 + zeta) * H(W; u). The caller clamps W + dW to [w_min, w_max].
double delta_w(const StdpConfig& cfg, double w, double u, Rng& rng);

/// Dense pre x post weights, row-major (one row per presynaptic neuron).
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::size_t n_pre, std::size_t n_post, double value = 0.0)
      : n_pre_(n_pre), n_post_(n_post), w_(n_pre * n_post, value) {}

  std::size_t n_pre() const noexcept { return n_pre_; }
  std::size_t n_post() const noexcept { return n_post_; }
  double& operator()(std::size_t pre, std::size_t post) noexcept { return w_[pre * n_post_ + post]; }
  double operator()(std::size_t pre, std::size_t post) const noexcept { return w_[pre * n_post_ + post]; }
  std::span<double> row(std::size_t pre) noexcept { return {w_.data() + pre * n_post_, n_post_}; }
  std::span<const double> row(std::size_t pre) const noexcept { return {w_.data() + pre * n_post_, n_post_}; }
  std::span<double> values() noexcept { return w_; }
  std::span<const double> values() const noexcept { return w_; }

  bool operator==(const WeightMatrix&) const = default;

 private:
  std::size_t n_pre_ = 0;
  std::size_t n_post_ = 0;
  std::vector<double> w_;
};

/// Exponentially decaying pre/post synaptic traces sharing one clock.
class TraceState {
 public:
  TraceState() = default;
  TraceState(std::size_t n_pre, std::size_t n_post, double tau_plus, double tau_minus);

  /// Decays all traces from the current time to `now`. Throws
  /// InvalidArgument when `now` is earlier than the current time.
  void advance_to(double now);

  double time() const noexcept { return time_; }
  double pre(std::size_t i) const noexcept { return pre_[i]; }
  double post(std::size_t j) const noexcept { return post_[j]; }
  std::span<const double> pre() const noexcept { return pre_; }
  std::span<const double> post() const noexcept { return post_; }
  void bump_pre(std::size_t i, double amount) noexcept { pre_[i] += amount; }
  void bump_post(std::size_t j, double amount) noexcept { post_[j] += amount; }

  bool operator==(const TraceState&) const = default;

 private:
  std::vector<double> pre_;
  std::vector<double> post_;
  double tau_plus_ = 17.0;
  double tau_minus_ = 34.0;
  double time_ = 0.0;
  double cached_dt_ = -1.0;
  double cached_pre_decay_ = 1.0;
  double cached_post_decay_ = 1.0;
};

/// Receives every applied weight change.
class UpdateSink {
 public:
  virtual ~UpdateSink() = default;
  virtual void record(std::size_t pre, std::size_t post, double delta) = 0;
};

struct TraceUpdateOptions {
  /// Traces at or below this value produce no update.
  double trace_floor = 0.0;
  UpdateSink* sink = nullptr;
};

/// Depression of row `pre` against the current post traces (a presynaptic
/// spike arriving now). Traces are read, not modified.
void depress_on_pre(const TraceState& traces, WeightMatrix& weights, const StdpConfig& cfg,
                    std::size_t pre, Rng& rng, const TraceUpdateOptions& opts = {});

/// Potentiation of column `post` against the current pre traces.
void potentiate_on_post(const TraceState& traces, WeightMatrix& weights, const StdpConfig& cfg,
                        std::size_t post, Rng& rng, const TraceUpdateOptions& opts = {});

/// Presynaptic spikes at `now`: advance traces, depress each row, then bump
/// the pre traces by cfg.pre_increment.
void on_pre_spike(TraceState& traces, WeightMatrix& weights, const StdpConfig& cfg,
                  std::span<const std::size_t> pre, double now, Rng& rng, const TraceUpdateOptions& opts = {});

/// Postsynaptic spike at `now`: advance traces, potentiate the column, then
/// bump the post trace by cfg.post_increment.
void on_post_spike(TraceState& traces, WeightMatrix& weights, const StdpConfig& cfg, std::size_t post,
                   double now, Rng& rng, const TraceUpdateOptions& opts = {});

}  // namespace stdpgen
