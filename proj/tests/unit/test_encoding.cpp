#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "stdpgen/encoding.hpp"
#include "stdpgen/errors.hpp"

using namespace stdpgen;

namespace {

// Scripted model: silent for the first `silent_rounds` presentations, then
// emits `spikes` spikes per presentation.
class ScriptedModel : public SpikingModel {
 public:
  ScriptedModel(int silent_rounds, std::uint64_t spikes) : silent_(silent_rounds), spikes_(spikes) {}
  std::size_t n_input() const override { return kImagePixels; }
  std::size_t n_exc() const override { return 1; }
  double dt() const override { return 0.5; }
  PresentationResult present(const SpikeSchedule&, double, Plasticity, IncrementLog*) override {
    ++presentations;
    PresentationResult r;
    r.total_exc_spikes = presentations > silent_ ? spikes_ : 0;
    r.exc_counts = {static_cast<std::uint32_t>(r.total_exc_spikes)};
    return r;
  }
  void rest(double) override { ++rests; }

  int presentations = 0;
  int rests = 0;

 private:
  int silent_;
  std::uint64_t spikes_;
};

ImageSample digit(float value = 128.0f) {
  ImageSample s;
  s.pixels.assign(kImagePixels, 0.0f);
  for (std::size_t i = 300; i < 400; ++i) s.pixels[i] = value;
  s.label = 4;
  return s;
}

}  // namespace

TEST(Encoding, PixelToRate) {
  EXPECT_DOUBLE_EQ(pixel_to_rate(255, 0), 63.75);
  EXPECT_DOUBLE_EQ(pixel_to_rate(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(pixel_to_rate(255, 1), 95.75);
  EXPECT_DOUBLE_EQ(pixel_to_rate(0, 3), 0.0);
}

TEST(EncodingProperty, PixelToRateMonotone) {
  for (int b = 0; b < 5; ++b)
    for (int x = 0; x < 255; ++x) {
      EXPECT_LE(pixel_to_rate(x, b), pixel_to_rate(x + 1, b));
      EXPECT_LE(pixel_to_rate(x, b), pixel_to_rate(x, b + 1));
    }
}

TEST(Encoding, ZeroRateIsEmpty) {
  Rng rng(1);
  std::vector<double> rates(10, 0.0);
  EXPECT_TRUE(poisson_schedule(rates, 350.0, 0.5, rng).empty());
}

TEST(Encoding, ScheduleSortedAndInRange) {
  Rng rng(1);
  std::vector<double> rates{10, 200, 63.75, 2500};
  const auto s = poisson_schedule(rates, 350.0, 0.5, rng);
  for (std::size_t k = 1; k < s.size(); ++k) {
    EXPECT_TRUE(s[k - 1].time_ms < s[k].time_ms || (s[k - 1].time_ms == s[k].time_ms && s[k - 1].input < s[k].input));
  }
  for (const auto& sp : s) {
    EXPECT_GE(sp.time_ms, 0.0);
    EXPECT_LT(sp.time_ms, 350.0);
  }
  // rate * dt >= 1000 fires in every bin
  EXPECT_EQ(std::count_if(s.begin(), s.end(), [](const InputSpike& x) { return x.input == 3; }), 700);
}

TEST(Encoding, NegativeRateRejected) {
  Rng rng(1);
  std::vector<double> rates{1.0, -1.0};
  EXPECT_THROW(poisson_schedule(rates, 350.0, 0.5, rng), InvalidArgument);
}

// Mean count over 10^4 trains against rate * duration; the band is three
// standard errors of the binomial per-train count.
TEST(EncodingProperty, PoissonMeanCount) {
  Rng rng(42);
  const double rate = 63.75, dur = 350.0, dt = 0.5;
  std::vector<double> rates{rate};
  const int reps = 10000;
  double sum = 0;
  for (int r = 0; r < reps; ++r) sum += static_cast<double>(poisson_schedule(rates, dur, dt, rng).size());
  const double mean = sum / reps;
  const double expected = rate * dur / 1000.0;
  EXPECT_DOUBLE_EQ(expected, 22.3125);
  const double p = rate * dt / 1000.0;
  const double sd = std::sqrt(dur / dt * p * (1 - p));
  EXPECT_NEAR(mean, expected, 3 * sd / std::sqrt(reps));
}

TEST(EncodingProperty, BinWidthInsensitive) {
  Rng rng(8);
  std::vector<double> rates{40.0};
  auto mean_count = [&](double dt) {
    double s = 0;
    for (int r = 0; r < 20000; ++r) s += static_cast<double>(poisson_schedule(rates, 350.0, dt, rng).size());
    return s / 20000;
  };
  const double a = mean_count(0.5), b = mean_count(0.25);
  EXPECT_NEAR(a / b, 1.0, 0.01);
}

TEST(EncodingProperty, ScheduleReproducible) {
  std::vector<double> rates(50, 30.0);
  Rng a(77), b(77);
  EXPECT_EQ(poisson_schedule(rates, 350.0, 0.5, a), poisson_schedule(rates, 350.0, 0.5, b));
}

TEST(Encoding, RetryNotNeeded) {
  ScriptedModel m(0, 7);
  Rng rng(1);
  const auto r = present_with_retry(m, digit(), rng);
  EXPECT_EQ(r.boost_level, 0);
  EXPECT_EQ(m.presentations, 1);
  EXPECT_EQ(m.rests, 0);
}

TEST(Encoding, RetryBoostsUntilActive) {
  ScriptedModel m(2, 9);
  Rng rng(1);
  const auto r = present_with_retry(m, digit(), rng);
  EXPECT_EQ(r.boost_level, 2);
  EXPECT_EQ(m.presentations, 3);
  EXPECT_EQ(m.rests, 2);
  EXPECT_GE(r.total_exc_spikes, 5u);
}

TEST(Encoding, RetryFailures) {
  Rng rng(1);
  ScriptedModel m(0, 10);
  ImageSample blank;
  blank.pixels.assign(kImagePixels, 0.0f);
  EXPECT_THROW(present_with_retry(m, blank, rng), EncodingFailure);
  EXPECT_EQ(m.presentations, 0);

  ScriptedModel dead(1000, 0);
  RetryOptions opts;
  opts.max_boost = 3;
  EXPECT_THROW(present_with_retry(dead, digit(), rng, opts), EncodingFailure);
  EXPECT_EQ(dead.presentations, 4);

  // Four spikes never satisfy min_spikes = 5.
  ScriptedModel weak(0, 4);
  EXPECT_THROW(present_with_retry(weak, digit(), rng, opts), EncodingFailure);
}

TEST(Encoding, NormalizeSample) {
  const auto s = digit(100.0f);
  const double sum = std::accumulate(s.pixels.begin(), s.pixels.end(), 0.0);
  const auto same = normalize_sample(s, sum);
  for (std::size_t i = 0; i < s.pixels.size(); ++i) EXPECT_NEAR(same.pixels[i], s.pixels[i], 1e-4);

  ImageSample u;
  u.pixels.assign(kImagePixels, 100.0f);
  const auto doubled = normalize_sample(u, 2 * 784 * 100.0);
  for (float px : doubled.pixels) EXPECT_FLOAT_EQ(px, 200.0f);
  u.pixels.assign(kImagePixels, 200.0f);
  for (float px : normalize_sample(u, 2 * 784 * 200.0).pixels) EXPECT_FLOAT_EQ(px, 255.0f);

  ImageSample blank;
  blank.pixels.assign(kImagePixels, 0.0f);
  EXPECT_THROW(normalize_sample(blank, 100.0), InvalidArgument);
}

TEST(EncodingProperty, NormalizedSumHitsTarget) {
  Rng rng(4);
  std::uniform_real_distribution<float> px(0.0f, 80.0f);
  std::bernoulli_distribution on(0.2);
  for (int k = 0; k < 20; ++k) {
    ImageSample s;
    s.pixels.resize(kImagePixels);
    for (auto& p : s.pixels) p = on(rng) ? px(rng) : 0.0f;
    const auto n = normalize_sample(s, kMnistMeanPixelSum);
    const double sum = std::accumulate(n.pixels.begin(), n.pixels.end(), 0.0);
    // Only meaningful while nothing clamps.
    if (*std::max_element(n.pixels.begin(), n.pixels.end()) < 255.0f)
      EXPECT_NEAR(sum, kMnistMeanPixelSum, 0.01 * kMnistMeanPixelSum);
  }
}
