#include "stdpgen/neuron.hpp"

#include <cmath>
#include <string>

#include "stdpgen/errors.hpp"

namespace stdpgen {

NeuronParams NeuronParams::excitatory() { return NeuronParams{}; }

NeuronParams NeuronParams::inhibitory() {
  NeuronParams p;
  p.tau_mem = 10.0;
  p.e_rest = -60.0;
  p.e_inh = -85.0;
  p.v_thresh_base = -40.0;
  p.v_reset = -45.0;
  p.t_refrac = 2.0;
  p.theta_plus = 0.0;
  p.is_excitatory = false;
  return p;
}

void NeuronParams::validate() const {
  auto require = [](bool ok, const char* key, const char* msg) {
    if (!ok) throw ConfigError(msg, key);
  };
  require(tau_mem > 0, "tau_mem", "must be > 0");
  require(tau_ge > 0, "tau_ge", "must be > 0");
  require(tau_gi > 0, "tau_gi", "must be > 0");
  require(tau_theta > 0, "tau_theta", "must be > 0");
  require(t_refrac >= 0, "t_refrac", "must be >= 0");
  require(theta_plus >= 0, "theta_plus", "must be >= 0");
  require(e_inh < e_rest, "e_inh", "must be below e_rest");
  require(e_rest < v_thresh_base, "v_thresh_base", "must be above e_rest");
  require(v_thresh_base < e_exc, "e_exc", "must be above v_thresh_base");
  require(v_reset >= e_inh && v_reset <= e_exc, "v_reset", "must lie within [e_inh, e_exc]");
}

NeuronPopulation::NeuronPopulation(std::size_t n, const NeuronParams& params)
    : v(n, params.e_rest),
      g_e(n, 0.0),
      g_i(n, 0.0),
      theta(n, 0.0),
      refrac_until(n, -1e300),
      spike_count(n, 0) {}

namespace {
// Decayed conductances would otherwise linger as slow subnormals.
constexpr double kConductanceFlush = 1e-30;
}  // namespace

void integrate_step(NeuronPopulation& pop, const NeuronParams& p, double dt, double now,
                    std::vector<std::size_t>& spiked) {
  spiked.clear();
  const double h = dt / p.tau_mem;
  const double ge_decay = std::exp(-dt / p.tau_ge);
  const double gi_decay = std::exp(-dt / p.tau_gi);
  const double theta_decay = std::exp(-dt / p.tau_theta);
  const std::size_t n = pop.size();

  for (std::size_t i = 0; i < n; ++i) {
    double v = pop.v[i];
    const double ge = pop.g_e[i];
    const double gi = pop.g_i[i];

    if (now < pop.refrac_until[i]) {
      v = p.v_reset;
    } else {
      const double g_tot = 1.0 + ge + gi;
      const double k = h * g_tot;
      if (k <= 1.0) {
        v += h * ((p.e_rest - v) + ge * (p.e_exc - v) + gi * (p.e_inh - v));
      } else {
        const double v_inf = (p.e_rest + ge * p.e_exc + gi * p.e_inh) / g_tot;
        v = v_inf + (v - v_inf) * std::exp(-k);
      }
    }
    if (!std::isfinite(v) || !std::isfinite(ge) || !std::isfinite(gi)) throw IntegrationDiverged(i);

    pop.g_e[i] = ge > kConductanceFlush ? ge * ge_decay : 0.0;
    pop.g_i[i] = gi > kConductanceFlush ? gi * gi_decay : 0.0;
    double theta = pop.theta[i] * theta_decay;

    if (now >= pop.refrac_until[i] && v >= p.v_thresh_base + theta) {
      v = p.v_reset;
      pop.refrac_until[i] = now + p.t_refrac;
      theta += p.theta_plus;
      ++pop.spike_count[i];
      spiked.push_back(i);
    }
    pop.v[i] = v;
    pop.theta[i] = theta;
  }
}

std::vector<std::size_t> integrate_step(NeuronPopulation& pop, const NeuronParams& params, double dt,
                                        double now) {
  std::vector<std::size_t> spiked;
  integrate_step(pop, params, dt, now, spiked);
  return spiked;
}

void inject_spikes(NeuronPopulation& pop, std::span<const SpikeTarget> targets) {
  for (const auto& t : targets) {
    if (t.neuron >= pop.size()) {
      throw InvalidArgument("inject_spikes: neuron index " + std::to_string(t.neuron) +
                            " out of range (size " + std::to_string(pop.size()) + ")");
    }
    if (!std::isfinite(t.weight)) throw InvalidArgument("inject_spikes: non-finite weight");
  }
  for (const auto& t : targets) {
    if (t.kind == SynapseKind::kExcitatory) {
      pop.g_e[t.neuron] += t.weight;
    } else {
      pop.g_i[t.neuron] += t.weight;
    }
  }
}

}  // namespace stdpgen
