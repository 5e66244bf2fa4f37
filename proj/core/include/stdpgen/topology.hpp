#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stdpgen/increment_log.hpp"
#include "stdpgen/neuron.hpp"
#include "stdpgen/plasticity.hpp"
#include "stdpgen/rng.hpp"

namespace stdpgen {

/// Spike emitted by input neuron `input` at `time_ms`, relative to the start
/// of the presentation.
struct InputSpike {
  double time_ms;
  std::uint32_t input;

  bool operator==(const InputSpike&) const = default;
};
using SpikeSchedule = std::vector<InputSpike>;

enum class Plasticity { kOff, kOn };

struct PresentationResult {
  std::vector<std::uint32_t> exc_counts;
  std::uint64_t total_exc_spikes = 0;
  /// Input-rate boost used for the returned presentation (see encoding).
  int boost_level = 0;

  bool operator==(const PresentationResult&) const = default;
};

/// What the encoding and evaluation layers need from a network.
class SpikingModel {
 public:
  virtual ~SpikingModel() = default;
  virtual std::size_t n_input() const = 0;
  virtual std::size_t n_exc() const = 0;
  virtual double dt() const = 0;
  virtual PresentationResult present(const SpikeSchedule& schedule, double duration_ms, Plasticity plasticity,
                                     IncrementLog* log) = 0;
  virtual void rest(double duration_ms) = 0;
};

/// Group name used for input->excitatory increments in an IncrementLog.
inline const std::string kInputExcGroup = "input_exc";

/// STDP settings used for the image-classification network: eta 0.1,
/// sigma 0.5, S 3, gamma 45, w0 0.5, tau 15/30 ms, c+ 0.5 and a weak c-
/// (mult uses c- / w0 so every rule depresses equally at w0).
StdpConfig network_stdp_defaults(StdpRule rule);

struct NetworkConfig {
  std::size_t n_input = 784;
  std::size_t n_exc = 100;
  std::size_t n_inh = 100;
  /// Initial input weights ~ U[w_init_low, w_init_high].
  double w_init_low = 0.0;
  double w_init_high = 0.3;
  double w_exc_inh = 10.4;
  double w_inh_exc = 17.0;
  /// When > 0, after every plastic presentation each excitatory neuron's
  /// incoming weights are rescaled to this sum (then clipped to bounds).
  double input_weight_sum = 78.0;
  StdpConfig stdp = network_stdp_defaults(StdpRule::kLog);
  NeuronParams exc = NeuronParams::excitatory();
  NeuronParams inh = NeuronParams::inhibitory();
  double dt = 0.5;
  double synaptic_delay = 0.75;
  /// Traces at or below this level trigger no weight update.
  double trace_floor = 1e-4;
  std::uint64_t seed = 1;

  /// Throws ConfigError with the offending key.
  void validate() const;

  bool operator==(const NetworkConfig&) const = default;
};

/// Input layer -> excitatory layer (all-to-all, plastic), excitatory ->
/// inhibitory (one-to-one, fixed), inhibitory -> excitatory (all but the
/// index-matched neuron, fixed).
class Network final : public SpikingModel {
 public:
  /// Validates `cfg` and draws the initial weights from cfg.seed.
  explicit Network(const NetworkConfig& cfg);

  std::size_t n_input() const override { return cfg_.n_input; }
  std::size_t n_exc() const override { return cfg_.n_exc; }
  double dt() const override { return cfg_.dt; }

  /// Runs one presentation. Throws InvalidArgument when a spike time lies
  /// outside [0, duration).
  PresentationResult present(const SpikeSchedule& schedule, double duration_ms, Plasticity plasticity,
                             IncrementLog* log) override;

  /// Zero-input simulation; no weight updates. The adaptive threshold keeps
  /// the mode of the preceding presentation (frozen after a frozen one).
  void rest(double duration_ms) override;

  const NetworkConfig& config() const noexcept { return cfg_; }
  const WeightMatrix& input_weights() const noexcept { return w_in_; }
  WeightMatrix& input_weights() noexcept { return w_in_; }
  const NeuronPopulation& excitatory() const noexcept { return exc_; }
  const NeuronPopulation& inhibitory() const noexcept { return inh_; }
  NeuronPopulation& excitatory() noexcept { return exc_; }
  NeuronPopulation& inhibitory() noexcept { return inh_; }
  const TraceState& traces() const noexcept { return traces_; }
  double clock() const noexcept { return static_cast<double>(step_) * cfg_.dt; }
  std::size_t delay_steps() const noexcept { return delay_steps_; }

  /// Replaces the plasticity rule (e.g. for a hyperparameter trial).
  void set_stdp(const StdpConfig& stdp);

  /// Excitatory neurons inhibited by inhibitory neuron `inh`.
  std::vector<std::size_t> inhibitory_targets(std::size_t inh) const;

  bool operator==(const Network& o) const;

 private:
  void step(const SpikeSchedule* schedule, std::size_t& cursor, std::uint64_t start_step, bool learn,
            bool adapt_theta, UpdateSink* sink, std::vector<std::uint32_t>* counts);
  void normalize_input_weights();

  NetworkConfig cfg_;
  NeuronParams exc_frozen_;
  WeightMatrix w_in_;
  TraceState traces_;
  NeuronPopulation exc_;
  NeuronPopulation inh_;
  std::size_t delay_steps_ = 0;
  std::vector<std::vector<std::uint32_t>> delay_ring_;
  std::uint64_t step_ = 0;
  bool learning_ = false;
  Rng noise_rng_;
  std::vector<std::size_t> exc_spiked_;
  std::vector<std::size_t> inh_spiked_;
};

Network build_network(const NetworkConfig& cfg);

PresentationResult run_presentation(Network& net, const SpikeSchedule& schedule, double duration_ms,
                                    Plasticity plasticity, IncrementLog* log = nullptr);

void rest_network(Network& net, double duration_ms);

}  // namespace stdpgen
