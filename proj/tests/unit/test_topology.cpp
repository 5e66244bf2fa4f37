#include <gtest/gtest.h>

#include <algorithm>

#include "stdpgen/encoding.hpp"
#include "stdpgen/errors.hpp"
#include "stdpgen/topology.hpp"

using namespace stdpgen;

namespace {

NetworkConfig small(std::size_t n_input, std::size_t n_exc) {
  NetworkConfig c;
  c.n_input = n_input;
  c.n_exc = c.n_inh = n_exc;
  return c;
}

SpikeSchedule regular(std::uint32_t input, double period, double duration) {
  SpikeSchedule s;
  for (double t = 0; t < duration; t += period) s.push_back({t, input});
  return s;
}

}  // namespace

TEST(Topology, SingleNeuronHasNoInhibitoryEdges) {
  Network net(small(4, 1));
  EXPECT_TRUE(net.inhibitory_targets(0).empty());
}

TEST(Topology, AllButOneAdjacency) {
  Network net(small(4, 3));
  for (std::size_t i = 0; i < 3; ++i) {
    const auto t = net.inhibitory_targets(i);
    ASSERT_EQ(t.size(), 2u);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(std::count(t.begin(), t.end(), j), i == j ? 0 : 1);
  }
  EXPECT_THROW(net.inhibitory_targets(3), InvalidArgument);
}

TEST(Topology, SeededWeightInit) {
  auto cfg = small(50, 10);
  Network a(cfg), b(cfg);
  EXPECT_EQ(a.input_weights(), b.input_weights());
  for (double w : a.input_weights().values()) {
    EXPECT_GE(w, cfg.w_init_low);
    EXPECT_LE(w, cfg.w_init_high);
  }
  cfg.seed = 2;
  EXPECT_NE(Network(cfg).input_weights(), a.input_weights());
  EXPECT_EQ(a.clock(), 0.0);
  EXPECT_TRUE(std::all_of(a.traces().pre().begin(), a.traces().pre().end(), [](double x) { return x == 0; }));
}

TEST(Topology, ConfigValidation) {
  auto cfg = small(10, 4);
  cfg.n_inh = 3;
  try {
    Network{cfg};
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "n_inh");
  }
  cfg = small(10, 4);
  cfg.w_init_high = 1.5;
  EXPECT_THROW(Network{cfg}, ConfigError);
  cfg = small(10, 4);
  cfg.w_inh_exc = 0;
  EXPECT_THROW(Network{cfg}, ConfigError);
}

TEST(Topology, EmptyScheduleIsSilent) {
  Network net(small(20, 5));
  const auto r = run_presentation(net, {}, 350.0, Plasticity::kOn);
  EXPECT_EQ(r.total_exc_spikes, 0u);
  EXPECT_DOUBLE_EQ(net.clock(), 350.0);
}

TEST(Topology, FrozenPresentationKeepsWeights) {
  Network net(small(30, 5));
  Rng rng(3);
  std::vector<double> rates(30, 60.0);
  const auto sched = poisson_schedule(rates, 350.0, net.dt(), rng);
  const auto before = net.input_weights();
  run_presentation(net, sched, 350.0, Plasticity::kOff);
  EXPECT_EQ(net.input_weights(), before);
}

TEST(Topology, DrivenExcitatoryThenInhibitory) {
  auto cfg = small(1, 1);
  cfg.w_init_low = cfg.w_init_high = 1.0;
  Network net(cfg);
  // 500 Hz input, presented one step at a time to see the spike order.
  double first_exc = -1, first_inh = -1;
  const double dt = net.dt();
  for (double t = 0; t < 350.0; t += dt) {
    SpikeSchedule s;
    if (std::fmod(t, 2.0) == 0.0) s.push_back({0.0, 0});
    run_presentation(net, s, dt, Plasticity::kOff);
    if (first_exc < 0 && net.excitatory().spike_count[0] > 0) first_exc = net.clock();
    if (first_inh < 0 && net.inhibitory().spike_count[0] > 0) first_inh = net.clock();
  }
  ASSERT_GT(first_exc, 0);
  ASSERT_GT(first_inh, 0);
  EXPECT_GT(first_inh, first_exc);
}

TEST(Topology, RestDecaysTowardRest) {
  Network net(small(10, 3));
  const Network snapshot = net;
  rest_network(net, 0.0);
  EXPECT_EQ(net, snapshot);

  const double e_rest = net.config().exc.e_rest;
  net.excitatory().v[1] = e_rest - 10.0;
  rest_network(net, 150.0);
  const double ratio = 10.0 / std::abs(net.excitatory().v[1] - e_rest);
  EXPECT_GE(ratio, std::exp(1.5) * 0.99);
}

TEST(Topology, TracesShrinkDuringRest) {
  auto cfg = small(10, 2);
  Network net(cfg);
  Rng rng(5);
  std::vector<double> rates(10, 50.0);
  run_presentation(net, poisson_schedule(rates, 100.0, net.dt(), rng), 100.0, Plasticity::kOn);
  const auto pre = std::vector<double>(net.traces().pre().begin(), net.traces().pre().end());
  rest_network(net, 150.0);
  for (std::size_t i = 0; i < pre.size(); ++i) EXPECT_LE(net.traces().pre(i), pre[i]);
}

TEST(Topology, ScheduleOutOfRangeRejected) {
  Network net(small(4, 2));
  EXPECT_THROW(run_presentation(net, {{350.0, 0}}, 350.0, Plasticity::kOff), InvalidArgument);
  EXPECT_THROW(run_presentation(net, {{-1.0, 0}}, 350.0, Plasticity::kOff), InvalidArgument);
  EXPECT_THROW(run_presentation(net, {{1.0, 4}}, 350.0, Plasticity::kOff), InvalidArgument);
}

TEST(TopologyProperty, LateralInhibitionSparesTheSpiker) {
  auto cfg = small(1, 2);
  Network net(cfg);
  net.input_weights()(0, 0) = 1.0;  // A driven, B not
  net.input_weights()(0, 1) = 0.0;
  double max_gi_b = 0;
  const double dt = net.dt();
  for (double t = 0; t < 200.0; t += dt) {
    SpikeSchedule s;
    if (std::fmod(t, 2.0) == 0.0) s.push_back({0.0, 0});
    run_presentation(net, s, dt, Plasticity::kOff);
    EXPECT_EQ(net.excitatory().g_i[0], 0.0);
    max_gi_b = std::max(max_gi_b, net.excitatory().g_i[1]);
  }
  EXPECT_GT(net.inhibitory().spike_count[0], 0u);
  EXPECT_EQ(net.inhibitory().spike_count[1], 0u);
  EXPECT_GT(max_gi_b, 0.0);
}

TEST(TopologyProperty, AddStdpClipsToBounds) {
  auto cfg = small(40, 6);
  cfg.stdp = network_stdp_defaults(StdpRule::kAdd);
  cfg.stdp.eta = 1.0;
  cfg.stdp.c_plus = 1.0;
  cfg.input_weight_sum = 0.0;
  Network net(cfg);
  Rng rng(11);
  std::vector<double> rates(40, 63.75);
  for (int k = 0; k < 3; ++k) {
    run_presentation(net, poisson_schedule(rates, 350.0, net.dt(), rng), 350.0, Plasticity::kOn);
    const auto w = net.input_weights().values();
    EXPECT_GE(*std::min_element(w.begin(), w.end()), cfg.stdp.w_min);
    EXPECT_LE(*std::max_element(w.begin(), w.end()), cfg.stdp.w_max);
  }
}

TEST(TopologyProperty, PresentationDeterministic) {
  auto cfg = small(40, 6);
  Network a(cfg), b(cfg);
  Rng r1(9), r2(9);
  std::vector<double> rates(40, 40.0);
  const auto ra = run_presentation(a, poisson_schedule(rates, 350.0, a.dt(), r1), 350.0, Plasticity::kOn);
  const auto rb = run_presentation(b, poisson_schedule(rates, 350.0, b.dt(), r2), 350.0, Plasticity::kOn);
  EXPECT_EQ(ra, rb);
  EXPECT_EQ(a, b);
}

TEST(Topology, WeightNormalizationAfterLearning) {
  auto cfg = small(100, 4);
  cfg.input_weight_sum = 12.0;
  Network net(cfg);
  Rng rng(2);
  std::vector<double> rates(100, 30.0);
  run_presentation(net, poisson_schedule(rates, 350.0, net.dt(), rng), 350.0, Plasticity::kOn);
  for (std::size_t j = 0; j < 4; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < 100; ++i) s += net.input_weights()(i, j);
    EXPECT_NEAR(s, 12.0, 1e-9);
  }
}
