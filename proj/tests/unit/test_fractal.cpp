#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "stdpgen/errors.hpp"
#include "stdpgen/increment_log.hpp"
#include "stdpgen/kde.hpp"
#include "stdpgen/stable.hpp"
#include "stdpgen/tail_index.hpp"

using namespace stdpgen;

namespace {

double mean_of(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / x.size(); }

double variance_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double s = 0;
  for (double v : x) s += (v - m) * (v - m);
  return s / (x.size() - 1);
}

double kurtosis_of(const std::vector<double>& x) {
  const double m = mean_of(x);
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = (v - m) * (v - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= x.size();
  m4 /= x.size();
  return m4 / (m2 * m2);
}

}  // namespace

TEST(Stable, GaussianLimitVariance) {
  Rng rng(1);
  const double scale = 1.7;
  const auto x = sample_alpha_stable(2.0, scale, 1000000, rng);
  EXPECT_NEAR(variance_of(x) / (2 * scale * scale), 1.0, 0.02);
}

TEST(Stable, CauchySymmetric) {
  Rng rng(2);
  const auto x = sample_alpha_stable(1.0, 1.0, 1000000, rng);
  const double below = std::count_if(x.begin(), x.end(), [](double v) { return v <= 0; }) / 1e6;
  EXPECT_NEAR(below, 0.5, 0.01);
  // Cauchy quartiles sit at +-scale.
  EXPECT_NEAR(quantile(x, 0.75), 1.0, 0.01);
}

TEST(Stable, TailSlopeAlpha15) {
  Rng rng(3);
  auto x = sample_alpha_stable(1.5, 1.0, 1000000, rng);
  for (auto& v : x) v = std::abs(v);
  std::sort(x.begin(), x.end());
  // Regress log survival on log x across the upper tail.
  std::vector<double> lx, ly;
  const double n = static_cast<double>(x.size());
  for (double q = 0.99; q < 0.9999; q += 0.0005) {
    const auto k = static_cast<std::size_t>(q * n);
    lx.push_back(std::log(x[k]));
    ly.push_back(std::log(1.0 - static_cast<double>(k) / n));
  }
  const double mx = mean_of(lx), my = mean_of(ly);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  EXPECT_GE(slope, -1.65);
  EXPECT_LE(slope, -1.35);
}

TEST(Stable, RejectsBadParameters) {
  Rng rng(1);
  EXPECT_THROW(sample_alpha_stable(0.0, 1.0, rng), InvalidArgument);
  EXPECT_THROW(sample_alpha_stable(2.1, 1.0, rng), InvalidArgument);
  EXPECT_THROW(sample_alpha_stable(1.5, 0.0, rng), InvalidArgument);
  OuLevyParams p;
  p.dims = 0;
  EXPECT_THROW(simulate_ou_levy(p, rng), InvalidArgument);
}

TEST(OuLevy, DeterministicDecayWithoutNoise) {
  OuLevyParams p;
  p.scale = 0.0;
  p.steps = 50;
  p.dims = 2;
  p.drift_rate = 0.05;
  p.dt = 0.5;
  Rng rng(1);
  const std::vector<double> x0{3.0, -1.0};
  const auto tr = simulate_ou_levy(p, rng, x0);
  for (std::size_t k = 0; k < p.steps; ++k)
    for (std::size_t d = 0; d < 2; ++d)
      EXPECT_NEAR(tr.at(k, d), x0[d] * std::pow(1 - p.drift_rate * p.dt, static_cast<double>(k)), 1e-12);
  EXPECT_EQ(tr.increments(0).size(), p.steps - 1);
}

// Discrete Gaussian AR(1): x' = a x + s sqrt(dt) xi, Var xi = 2, so the
// stationary variance is 2 s^2 dt / (1 - a^2).
TEST(OuLevy, GaussianStationaryVariance) {
  OuLevyParams p;
  p.alpha = 2.0;
  p.scale = 0.8;
  p.drift_rate = 0.01;
  p.dt = 1.0;
  p.steps = 1000000;
  p.dims = 1;
  Rng rng(5);
  const auto tr = simulate_ou_levy(p, rng);
  std::vector<double> tail(tr.values.begin() + 2000, tr.values.end());
  const double a = 1 - p.drift_rate * p.dt;
  const double expected = 2 * p.scale * p.scale * p.dt / (1 - a * a);
  EXPECT_NEAR(variance_of(tail) / expected, 1.0, 0.05);
}

TEST(OuLevy, HeavierTailsForSmallerAlpha) {
  auto kurt = [](double alpha) {
    OuLevyParams p;
    p.alpha = alpha;
    p.steps = 200000;
    p.dims = 1;
    Rng rng(6);
    return kurtosis_of(simulate_ou_levy(p, rng).increments(0));
  };
  EXPECT_GT(kurt(1.2), kurt(1.8));
}

TEST(TailIndex, RecoversKnownAlpha) {
  struct Case {
    double alpha, lo, hi;
  };
  for (auto c : {Case{2.0, 1.95, 2.0}, Case{1.5, 1.45, 1.55}, Case{1.0, 0.95, 1.05}}) {
    Rng rng(10 + static_cast<int>(c.alpha * 10));
    const auto x = sample_alpha_stable(c.alpha, 1.0, 1000000, rng);
    const double a = estimate_tail_index(x, 1000);
    EXPECT_GE(a, c.lo) << "alpha " << c.alpha;
    EXPECT_LE(a, c.hi) << "alpha " << c.alpha;
  }
}

TEST(TailIndex, SkewedDriftedSample) {
  // Depression side shrunk by 5x: median and mean differ by a lot.
  Rng rng(14);
  auto x = sample_alpha_stable(1.5, 1.0, 1000000, rng);
  for (auto& v : x) v = v > 0 ? v : 0.2 * v;
  EXPECT_NEAR(estimate_tail_index(x), 1.5, 0.1);
}

TEST(TailIndex, Errors) {
  std::vector<double> x(10, 1.0);
  EXPECT_THROW(estimate_tail_index(x, 6), EstimationError);
  EXPECT_THROW(estimate_tail_index(x, 1), EstimationError);
  EXPECT_THROW(estimate_tail_index(x, 2), EstimationError);  // all zero after centring
  EXPECT_THROW(estimate_tail_index(std::vector<double>{1.0, 2.0}), EstimationError);
}

TEST(TailIndexProperty, RangeAndScaleInvariance) {
  Rng rng(12);
  std::uniform_real_distribution<double> alpha(0.8, 2.0);
  for (int k = 0; k < 8; ++k) {
    auto x = sample_alpha_stable(alpha(rng), 1.0, 40000, rng);
    const double a = estimate_tail_index(x);
    EXPECT_GT(a, 0.0);
    EXPECT_LE(a, 2.0);
    for (double c : {1e-6, 0.37, 250.0}) {
      std::vector<double> y(x);
      for (auto& v : y) v *= c;
      EXPECT_NEAR(estimate_tail_index(y), a, 0.01);
    }
  }
  // Light-tailed data clamps at 2.
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> flat(40000);
  for (auto& v : flat) v = u(rng);
  EXPECT_EQ(estimate_tail_index(flat), 2.0);
}

TEST(BgIndex, MaxOfGroups) {
  EXPECT_EQ(bg_index(std::vector<double>{1.3}), 1.3);
  EXPECT_EQ(bg_index(std::vector<double>{1.2, 1.8}), 1.8);
  EXPECT_EQ(bg_index(std::vector<double>{1.4, 1.4, 1.4}), 1.4);
  EXPECT_THROW(bg_index(std::vector<double>{}), EstimationError);
}

TEST(BgIndexProperty, AddingGroupNeverLowers) {
  Rng rng(4);
  std::uniform_real_distribution<double> a(0.1, 2.0);
  std::vector<double> groups{a(rng)};
  for (int k = 0; k < 50; ++k) {
    const double before = bg_index(groups);
    groups.push_back(a(rng));
    EXPECT_GE(bg_index(groups), before);
  }
}

TEST(BgIndex, FromIncrementLog) {
  IncrementLog log(1 << 20, 1);
  Rng rng(8);
  for (double v : sample_alpha_stable(1.2, 1.0, 100000, rng)) log.record("a", v);
  for (double v : sample_alpha_stable(1.8, 1.0, 100000, rng)) log.record("b", v);
  const auto est = estimate_bg_index(log);
  EXPECT_EQ(est.bg_index, std::max(est.alpha_hat.at("a"), est.alpha_hat.at("b")));
  EXPECT_EQ(est.sample_counts.at("a"), 100000u);
  EXPECT_LT(est.alpha_hat.at("a"), est.alpha_hat.at("b"));
}

TEST(IncrementLog, ReservoirBoundsMemory) {
  IncrementLog log(1000, 3);
  for (int i = 0; i < 100000; ++i) log.record("g", i);
  EXPECT_EQ(log.samples("g").size(), 1000u);
  EXPECT_EQ(log.events_seen("g"), 100000u);
  // A uniform subset of 0..99999 has mean near 49999.5 (sd ~ 913).
  EXPECT_NEAR(mean_of(log.samples("g")), 49999.5, 4 * 28868.0 / std::sqrt(1000.0));
}

TEST(IncrementLog, GroupsAndErrors) {
  IncrementLog log(10);
  EXPECT_FALSE(log.has_group("x"));
  log.sink("x").record(0, 0, 0.5);
  EXPECT_TRUE(log.has_group("x"));
  EXPECT_EQ(log.samples("x"), std::vector<double>{0.5});
  EXPECT_THROW(log.samples("y"), InvalidArgument);
  EXPECT_THROW(log.record("x", std::nan("")), InvalidArgument);
  EXPECT_THROW(log.record("x", INFINITY), InvalidArgument);
  log.clear();
  EXPECT_TRUE(log.group_names().empty());
}

TEST(Kde, SingleKernelPeak) {
  const std::vector<double> x{0.0};
  EXPECT_NEAR(kde_evaluate(x, 1.0, 0.0), 1.0 / std::sqrt(2 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(kde_evaluate(x, 1.0, 0.0), 0.39894, 1e-5);
}

TEST(Kde, Symmetric) {
  const std::vector<double> x{-0.7, 0.7};
  for (double q : {0.0, 0.3, 1.1, 4.0}) EXPECT_NEAR(kde_evaluate(x, 0.2, q), kde_evaluate(x, 0.2, -q), 1e-15);
}

TEST(Kde, BandwidthRule) {
  Rng rng(21);
  std::normal_distribution<double> n01;
  std::vector<double> x(1000);
  for (auto& v : x) v = n01(rng);
  const double t = kde_bandwidth(x);
  EXPECT_NEAR(t / std::pow(0.9 * std::pow(1000.0, -0.2), 2), 1.0, 0.1);

  // Direct recomputation with the measured spread.
  const double sd = std::sqrt(variance_of(x));
  const double iqr = quantile(x, 0.75) - quantile(x, 0.25);
  EXPECT_NEAR(t, std::pow(0.9 * std::min(sd, iqr / 1.34) * std::pow(1000.0, -0.2), 2), 1e-12);

  std::vector<double> y(x);
  for (auto& v : y) v *= 3.0;
  EXPECT_NEAR(kde_bandwidth(y), 9.0 * t, 1e-12);

  std::vector<double> big(100000);
  for (auto& v : big) v = n01(rng);
  EXPECT_LT(kde_bandwidth(big), t);
}

TEST(Kde, DegenerateSamples) {
  EXPECT_THROW(kde_bandwidth(std::vector<double>{1.0}), InvalidArgument);
  EXPECT_THROW(kde_bandwidth(std::vector<double>{2.0, 2.0, 2.0}), InvalidArgument);
  // Zero IQR with nonzero spread falls back to sd.
  EXPECT_GT(kde_bandwidth(std::vector<double>{0, 0, 0, 0, 0, 0, 0, 1}), 0.0);
}

TEST(KdeProperty, PositiveAndIntegratesToOne) {
  Rng rng(30);
  std::normal_distribution<double> n01;
  std::exponential_distribution<double> ex(2.0);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> x(200 + 50 * k);
    for (auto& v : x) v = k % 2 ? n01(rng) : ex(rng);
    const double t = kde_bandwidth(x);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double pad = 10 * std::sqrt(t);
    const auto g = kde_grid(x, t, *lo - pad, *hi + pad, 4001);
    double integral = 0;
    for (std::size_t i = 1; i < g.x.size(); ++i) integral += 0.5 * (g.density[i] + g.density[i - 1]) * (g.x[i] - g.x[i - 1]);
    EXPECT_NEAR(integral, 1.0, 1e-3);
    for (double d : g.density) EXPECT_GT(d, 0.0);
  }
}

TEST(Kde, ModeCount) {
  EXPECT_EQ(count_modes(std::vector<double>{0, 1, 2, 1, 0}), 1u);
  EXPECT_EQ(count_modes(std::vector<double>{0, 2, 1, 3, 0}), 2u);
  EXPECT_EQ(count_modes(std::vector<double>{0, 2, 2, 2, 0}), 1u);
  EXPECT_EQ(count_modes(std::vector<double>{1, 1, 1}), 0u);
  EXPECT_EQ(count_modes(std::vector<double>{3, 2, 1}), 1u);

  const std::vector<double> bimodal{-2, -2.1, -1.9, 2, 2.1, 1.9};
  const auto g = kde_grid(bimodal, 0.05, -4, 4, 401);
  EXPECT_EQ(count_modes(g.density), 2u);
}

TEST(Kde, QuantileAndSkewness) {
  const std::vector<double> x{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(quantile(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile(x, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile(x, 0.5), 2.5);
  EXPECT_NEAR(skewness(std::vector<double>{1, 2, 3}), 0.0, 1e-15);
  EXPECT_GT(skewness(std::vector<double>{0, 0, 0, 0, 10}), 0.0);
  EXPECT_LT(skewness(std::vector<double>{0, 10, 10, 10, 10}), 0.0);
}
