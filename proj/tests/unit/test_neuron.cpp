#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "stdpgen/errors.hpp"
#include "stdpgen/neuron.hpp"

using namespace stdpgen;

namespace {

// Fine-step RK4 of tau dv/dt = (e_rest - v) + G (e_exc - v) with G frozen.
double rk4_frozen(const NeuronParams& p, double v, double g, double t_end, double h) {
  auto f = [&](double x) { return ((p.e_rest - x) + g * (p.e_exc - x)) / p.tau_mem; };
  for (double t = 0; t < t_end - 1e-12; t += h) {
    const double k1 = f(v), k2 = f(v + 0.5 * h * k1), k3 = f(v + 0.5 * h * k2), k4 = f(v + h * k3);
    v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return v;
}

double run(NeuronPopulation& pop, const NeuronParams& p, double dt, double t_end) {
  double now = 0;
  while (now < t_end - 1e-9) {
    now += dt;
    integrate_step(pop, p, dt, now);
  }
  return now;
}

}  // namespace

TEST(Neuron, HomogeneousDecay) {
  const auto p = NeuronParams::excitatory();
  NeuronPopulation pop(1, p);
  const double v0 = p.e_rest - 10.0;
  pop.v[0] = v0;
  const double t = run(pop, p, 0.5, 5 * p.tau_mem);
  const double expected = p.e_rest + (v0 - p.e_rest) * std::exp(-t / p.tau_mem);
  EXPECT_NEAR(pop.v[0], expected, 0.01 * std::abs(expected));
  EXPECT_EQ(pop.spike_count[0], 0u);
}

TEST(Neuron, ConstantConductanceFixedPoint) {
  auto p = NeuronParams::excitatory();
  p.tau_ge = 1e15;  // g_e effectively frozen
  const double g = 0.2;
  NeuronPopulation pop(1, p);
  pop.g_e[0] = g;
  run(pop, p, 0.5, 1000.0);
  const double fixed = (p.e_rest + g * p.e_exc) / (1 + g);
  EXPECT_NEAR(pop.v[0], fixed, 0.01 * std::abs(fixed));
  EXPECT_NEAR(rk4_frozen(p, p.e_rest, g, 1000.0, 0.01), fixed, 0.01 * std::abs(fixed));
  EXPECT_LT(fixed, p.v_thresh_base);
}

TEST(Neuron, RefractoryAfterSpike) {
  const auto p = NeuronParams::excitatory();
  NeuronPopulation pop(1, p);
  pop.v[0] = p.v_thresh_base + 1.0;
  const double dt = 0.5;
  double now = dt;
  auto spiked = integrate_step(pop, p, dt, now);
  ASSERT_EQ(spiked.size(), 1u);
  EXPECT_EQ(pop.v[0], p.v_reset);
  EXPECT_DOUBLE_EQ(pop.theta[0], p.theta_plus);

  for (; now + dt < dt + p.t_refrac - 1e-9;) {
    now += dt;
    pop.g_e[0] = 50.0;
    EXPECT_TRUE(integrate_step(pop, p, dt, now).empty()) << "at t=" << now;
    EXPECT_EQ(pop.v[0], p.v_reset);
  }
  now += dt;
  pop.g_e[0] = 50.0;
  EXPECT_EQ(integrate_step(pop, p, dt, now).size(), 1u);
}

TEST(Neuron, InjectAdditiveAndSeparated) {
  const auto p = NeuronParams::excitatory();
  NeuronPopulation pop(3, p);
  const SpikeTarget e{1, 0.5, SynapseKind::kExcitatory};
  inject_spikes(pop, std::vector{e, e});
  EXPECT_EQ(pop.g_e[1], 1.0);
  EXPECT_EQ(pop.g_i[1], 0.0);

  const auto before = pop;
  inject_spikes(pop, std::vector{SpikeTarget{2, 0.25, SynapseKind::kInhibitory}});
  EXPECT_EQ(pop.g_i[2], 0.25);
  EXPECT_EQ(pop.g_e, before.g_e);
  EXPECT_EQ(pop.v, before.v);

  const auto snapshot = pop;
  inject_spikes(pop, std::span<const SpikeTarget>{});
  EXPECT_EQ(pop, snapshot);
}

TEST(Neuron, InjectRejectsBadTargets) {
  NeuronPopulation pop(2, NeuronParams::excitatory());
  EXPECT_THROW(inject_spikes(pop, std::vector{SpikeTarget{2, 1.0, SynapseKind::kExcitatory}}), InvalidArgument);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(inject_spikes(pop, std::vector{SpikeTarget{0, nan, SynapseKind::kExcitatory}}), InvalidArgument);
  EXPECT_EQ(pop.g_e[0], 0.0);
}

TEST(Neuron, DivergenceNamesNeuron) {
  const auto p = NeuronParams::excitatory();
  NeuronPopulation pop(4, p);
  pop.v[2] = std::numeric_limits<double>::quiet_NaN();
  try {
    integrate_step(pop, p, 0.5, 0.5);
    FAIL() << "expected IntegrationDiverged";
  } catch (const IntegrationDiverged& e) {
    EXPECT_EQ(e.neuron(), 2u);
    EXPECT_EQ(e.code(), ErrorCode::kIntegrationDiverged);
  }
}

TEST(Neuron, ParamsValidation) {
  EXPECT_NO_THROW(NeuronParams::excitatory().validate());
  EXPECT_NO_THROW(NeuronParams::inhibitory().validate());
  auto p = NeuronParams::excitatory();
  p.e_rest = p.v_thresh_base + 1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = NeuronParams::excitatory();
  p.tau_mem = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = NeuronParams::excitatory();
  p.t_refrac = -1;
  EXPECT_THROW(p.validate(), ConfigError);
}

// Random nonnegative conductance kicks never push v outside the reversal
// potentials, refractory neurons never fire, and theta only decays between
// spikes and jumps by theta_plus at each one.
TEST(NeuronProperty, BoundedStateUnderRandomDrive) {
  for (auto p : {NeuronParams::excitatory(), NeuronParams::inhibitory()}) {
    p.theta_plus = 0.5;
    p.tau_theta = 200.0;
    const double dt = std::min({p.tau_ge, p.tau_gi, p.tau_mem}) / 10;
    std::mt19937_64 rng(7);
    std::exponential_distribution<double> kick(0.3);
    std::bernoulli_distribution fire(0.05);
    const std::size_t n = 16;
    NeuronPopulation pop(n, p);
    std::vector<double> prev_theta(n, 0.0);
    std::vector<std::size_t> spiked;
    double now = 0;
    for (int step = 0; step < 20000; ++step) {
      now += dt;
      std::vector<SpikeTarget> targets;
      for (std::size_t i = 0; i < n; ++i) {
        if (fire(rng)) targets.push_back({i, kick(rng), SynapseKind::kExcitatory});
        if (fire(rng)) targets.push_back({i, kick(rng), SynapseKind::kInhibitory});
      }
      inject_spikes(pop, targets);
      std::vector<bool> refractory(n);
      for (std::size_t i = 0; i < n; ++i) refractory[i] = pop.is_refractory(i, now);
      integrate_step(pop, p, dt, now, spiked);
      std::vector<bool> fired(n, false);
      for (auto i : spiked) {
        EXPECT_FALSE(refractory[i]);
        fired[i] = true;
      }
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_GE(pop.v[i], p.e_inh - 0.5);
        ASSERT_LE(pop.v[i], p.e_exc + 0.5);
        ASSERT_GE(pop.g_e[i], 0.0);
        ASSERT_GE(pop.g_i[i], 0.0);
        const double decayed = prev_theta[i] * std::exp(-dt / p.tau_theta);
        if (fired[i]) {
          ASSERT_NEAR(pop.theta[i] - decayed, p.theta_plus, 1e-12);
        } else {
          ASSERT_LE(pop.theta[i], prev_theta[i]);
        }
        prev_theta[i] = pop.theta[i];
      }
    }
  }
}

// Subthreshold relaxation over a 350 ms presentation: halving dt roughly
// halves the error against a fine reference.
TEST(NeuronProperty, FirstOrderConvergence) {
  auto p = NeuronParams::excitatory();
  p.tau_ge = 1e15;
  auto final_v = [&](double dt) {
    NeuronPopulation pop(1, p);
    pop.g_e[0] = 0.15;
    pop.v[0] = p.e_inh + 5;
    run(pop, p, dt, 350.0);
    return pop.v[0];
  };
  const double ref = rk4_frozen(p, p.e_inh + 5, 0.15, 350.0, 0.001);
  const double e1 = std::abs(final_v(1.0) - ref);
  const double e2 = std::abs(final_v(0.5) - ref);
  const double e3 = std::abs(final_v(0.25) - ref);
  EXPECT_GT(e1, 0.0);
  EXPECT_NEAR(e1 / e2, 2.0, 0.3);
  EXPECT_NEAR(e2 / e3, 2.0, 0.3);
}
