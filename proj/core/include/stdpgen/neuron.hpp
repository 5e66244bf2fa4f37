#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stdpgen {

/// Conductance-based leaky integrate-and-fire parameters.
///
/// Potentials in mV, times in ms. The membrane obeys
///   tau_mem dv/dt = (e_rest - v) + g_e (e_exc - v) + g_i (e_inh - v)
/// with dimensionless conductances that decay with tau_ge / tau_gi.
/// The firing threshold is v_thresh_base + theta, where theta jumps by
/// theta_plus on every spike and relaxes with tau_theta.
struct NeuronParams {
  double tau_mem = 100.0;
  double e_rest = -65.0;
  double e_exc = 0.0;
  double e_inh = -100.0;
  double v_thresh_base = -52.0;
  double v_reset = -65.0;
  double t_refrac = 5.0;
  double tau_ge = 1.0;
  double tau_gi = 2.0;
  double theta_plus = 0.05;
  double tau_theta = 1e7;
  bool is_excitatory = true;

  static NeuronParams excitatory();
  static NeuronParams inhibitory();

  /// Throws ConfigError when an invariant is violated.
  void validate() const;

  bool operator==(const NeuronParams&) const = default;
};

struct NeuronPopulation {
  std::vector<double> v;
  std::vector<double> g_e;
  std::vector<double> g_i;
  std::vector<double> theta;
  std::vector<double> refrac_until;
  std::vector<std::uint32_t> spike_count;

  NeuronPopulation() = default;
  /// All neurons at rest, conductances and theta zero, not refractory.
  NeuronPopulation(std::size_t n, const NeuronParams& params);

  std::size_t size() const noexcept { return v.size(); }
  bool is_refractory(std::size_t i, double now) const noexcept { return now < refrac_until[i]; }

  bool operator==(const NeuronPopulation&) const = default;
};

/// Advances every neuron by one step ending at time `now` and appends the
/// indices of neurons that fired to `spiked` (which is cleared first).
///
/// The membrane uses explicit Euler while dt/tau * (1 + g_e + g_i) <= 1 and
/// switches to the exponential step (exact for frozen conductances) above
/// that, so v stays inside [e_inh, e_exc] for any nonnegative conductance.
/// Throws IntegrationDiverged on non-finite state.
void integrate_step(NeuronPopulation& pop, const NeuronParams& params, double dt, double now,
                    std::vector<std::size_t>& spiked);

std::vector<std::size_t> integrate_step(NeuronPopulation& pop, const NeuronParams& params, double dt,
                                        double now);

enum class SynapseKind { kExcitatory, kInhibitory };

struct SpikeTarget {
  std::size_t neuron;
  double weight;
  SynapseKind kind;
};

/// Instantaneous conductance jump by the synaptic weight.
void inject_spikes(NeuronPopulation& pop, std::span<const SpikeTarget> targets);

}  // namespace stdpgen
