#include <gtest/gtest.h>

#include <cmath>

#include "stdpgen/encoding.hpp"
#include "stdpgen/errors.hpp"
#include "stdpgen/harness.hpp"

using namespace stdpgen;

namespace {

// Class c lights rows 2c+4 .. 2c+5 of the image.
ImageSample pattern(std::uint8_t label) {
  ImageSample s;
  s.pixels.assign(kImagePixels, 0.0f);
  for (std::size_t r = 2 * label + 4; r < 2 * label + 6u; ++r)
    for (std::size_t c = 4; c < 24; ++c) s.pixels[r * kImageSide + c] = 255.0f;
  s.label = label;
  return s;
}

std::vector<ImageSample> dataset(std::size_t n) {
  std::vector<ImageSample> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pattern(static_cast<std::uint8_t>(i % 10)));
  return out;
}

NetworkConfig tiny() {
  NetworkConfig c;
  c.n_exc = c.n_inh = 10;
  return c;
}

TrainOptions quick() {
  TrainOptions o;
  o.iterations = 2;
  o.samples_per_iteration = 20;
  o.train_eval_samples = 20;
  o.test_eval_samples = 10;
  o.tail_k1 = 8;
  return o;
}

// Double-entry oracle for the loss normalisation.
double oracle_ce(const std::vector<double>& counts, std::size_t label) {
  double mx = 0;
  for (double c : counts) mx = std::max(mx, c);
  std::vector<double> p;
  double s = 0;
  for (double c : counts) {
    p.push_back(c / mx + 1e-9);
    s += p.back();
  }
  return -std::log(p[label] / s);
}

}  // namespace

TEST(Harness, ArgmaxTieBreaksLow) {
  ClassScores s{};
  EXPECT_EQ(argmax_class(s), 0);
  s[7] = 9;
  s[0] = 5;
  EXPECT_EQ(argmax_class(s), 7);
  s[3] = 9;
  EXPECT_EQ(argmax_class(s), 3);
}

TEST(Harness, AssignFromResponses) {
  std::vector<Response> rs;
  rs.push_back({{0, 4, 0}, 3});
  rs.push_back({{0, 2, 0}, 3});
  rs.push_back({{5, 0, 0}, 0});
  rs.push_back({{9, 0, 0}, 7});
  const auto a = assign_from_responses(rs, 3);
  ASSERT_EQ(a.labels.size(), 3u);
  EXPECT_EQ(a.labels[0], 7);
  EXPECT_EQ(a.labels[1], 3);
  EXPECT_EQ(a.labels[2], 0);  // never fires
  rs.push_back({{1, 1}, 2});
  EXPECT_THROW(assign_from_responses(rs, 3), InvalidArgument);
}

TEST(Harness, AssignUsesClassMeans) {
  // Neuron 0: class 1 seen 4 times with 3 spikes each (mean 3) against class
  // 2 once with 5 spikes (mean 5). Totals would pick class 1.
  std::vector<Response> rs;
  for (int k = 0; k < 4; ++k) rs.push_back({{3}, 1});
  rs.push_back({{5}, 2});
  EXPECT_EQ(assign_from_responses(rs, 1).labels[0], 2);
}

TEST(Harness, PredictFromCounts) {
  ClassAssignment a{{2, 2, 5, 5, 5}};
  EXPECT_EQ(predict_from_counts(a, std::vector<std::uint32_t>{3, 4, 0, 0, 0}), 2);
  EXPECT_EQ(predict_from_counts(a, std::vector<std::uint32_t>{0, 0, 0, 0, 0}), 0);
  // Means: class 2 -> 3, class 5 -> 3. Lower id wins.
  EXPECT_EQ(predict_from_counts(a, std::vector<std::uint32_t>{3, 3, 3, 3, 3}), 2);
  // Class with no neurons scores 0.
  const auto m = class_mean_counts(a, std::vector<std::uint32_t>{1, 1, 1, 1, 1});
  EXPECT_EQ(m[9], 0.0);
  EXPECT_EQ(class_total_counts(a, std::vector<std::uint32_t>{1, 1, 1, 1, 1})[5], 3.0);
}

TEST(Harness, CrossEntropy) {
  ClassScores uniform;
  uniform.fill(4.0);
  EXPECT_NEAR(cross_entropy_from_counts(uniform, 6), std::log(10.0), 1e-12);

  ClassScores peak{};
  peak[2] = 11;
  EXPECT_NEAR(cross_entropy_from_counts(peak, 2), 0.0, 1e-7);

  ClassScores mixed{};
  mixed[4] = 9;
  mixed[1] = 1;
  EXPECT_NEAR(cross_entropy_from_counts(mixed, 4), -std::log(0.9), 1e-7);
  EXPECT_NEAR(cross_entropy_from_counts(mixed, 4), 0.10536, 1e-5);

  ClassScores silent{};
  EXPECT_NEAR(cross_entropy_from_counts(silent, 0), std::log(10.0), 1e-12);
}

TEST(HarnessProperty, CrossEntropyMatchesOracle) {
  Rng rng(6);
  std::uniform_int_distribution<int> c(0, 30);
  for (int k = 0; k < 500; ++k) {
    ClassScores s{};
    std::vector<double> v(10);
    for (std::size_t i = 0; i < 10; ++i) s[i] = v[i] = c(rng);
    v[k % 10] = s[k % 10] = s[k % 10] + 1;
    const auto label = static_cast<std::uint8_t>(c(rng) % 10);
    const double ce = cross_entropy_from_counts(s, label);
    EXPECT_NEAR(ce, oracle_ce(v, label), 1e-12);
    EXPECT_GE(ce, 0.0);
  }
}

TEST(Harness, TrainingLossUsesClassTotals) {
  ClassAssignment a{{1, 1, 2}};
  std::vector<Response> rs{{{4, 5, 0}, 1}, {{0, 0, 6}, 2}};
  const double expected = (-std::log((1 + 1e-9) / (1 + 10e-9)) * 2) / 2;
  EXPECT_NEAR(training_loss(a, rs), expected, 1e-12);
  EXPECT_EQ(training_loss(a, std::vector<Response>{}), 0.0);
}

TEST(Harness, PerfectPredictor) {
  const auto data = dataset(50);
  const auto st = evaluate_accuracy([](const ImageSample& s, Rng&) { return s.label; }, data, 5, 1);
  EXPECT_EQ(st.mean, 100.0);
  EXPECT_EQ(st.std, 0.0);
  EXPECT_EQ(st.runs.size(), 5u);
}

TEST(Harness, RandomPredictorNearChance) {
  const auto data = dataset(20000);
  const auto st = evaluate_accuracy(
      [](const ImageSample&, Rng& rng) { return static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 9)(rng)); },
      data, 1, 3);
  EXPECT_NEAR(st.mean, 10.0, 100.0 * 4 * std::sqrt(0.09 / 20000));
  EXPECT_EQ(st.std, 0.0);
  EXPECT_THROW(evaluate_accuracy([](const ImageSample&, Rng&) { return std::uint8_t{0}; }, data, 0, 3),
               InvalidArgument);
}

TEST(Harness, ZeroIterations) {
  const auto data = dataset(10);
  auto o = quick();
  o.iterations = 0;
  const auto r = train(tiny(), data, data, o);
  EXPECT_TRUE(r.metrics.empty());
  EXPECT_EQ(r.network.input_weights(), Network(tiny()).input_weights());
}

TEST(Harness, TooLittleData) {
  const auto data = dataset(30);
  EXPECT_THROW(train(tiny(), data, data, quick()), InvalidArgument);
}

TEST(Harness, FrozenLearningWithoutNormalization) {
  auto cfg = tiny();
  cfg.stdp.eta = 1e-300;
  cfg.input_weight_sum = 0.0;
  const auto data = dataset(40);
  const auto r = train(cfg, data, data, quick());
  EXPECT_EQ(r.network.input_weights(), Network(cfg).input_weights());
}

TEST(HarnessProperty, MetricsInvariantsAndReproducibility) {
  const auto data = dataset(60);
  std::vector<Metrics> seen;
  auto o = quick();
  o.on_metrics = [&](const Metrics& m) { seen.push_back(m); };
  const auto a = train(tiny(), data, data, o);
  const auto b = train(tiny(), data, data, quick());
  ASSERT_EQ(a.metrics.size(), 2u);
  EXPECT_EQ(seen.size(), 2u);
  for (std::size_t i = 0; i < a.metrics.size(); ++i) {
    const auto& m = a.metrics[i];
    EXPECT_EQ(m.iteration, i + 1);
    EXPECT_GE(m.training_accuracy, 0.0);
    EXPECT_LE(m.training_accuracy, 100.0);
    EXPECT_GE(m.testing_accuracy, 0.0);
    EXPECT_LE(m.testing_accuracy, 100.0);
    EXPECT_EQ(m.generalization_error, m.training_accuracy - m.testing_accuracy);
    EXPECT_EQ(m.training_loss, b.metrics[i].training_loss);
    EXPECT_EQ(m.testing_accuracy, b.metrics[i].testing_accuracy);
    EXPECT_EQ(m.bg_index.has_value(), i + 1 == a.metrics.size());
  }
  EXPECT_EQ(a.network, b.network);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.assignment.labels.size(), 10u);
  ASSERT_TRUE(a.metrics.back().bg_index);
  EXPECT_GT(*a.metrics.back().bg_index, 0.0);
  EXPECT_LE(*a.metrics.back().bg_index, 2.0);
  EXPECT_EQ(a.increments.iteration(), 2);
}

TEST(HarnessProperty, EvaluationLeavesWeightsUntouched) {
  const auto data = dataset(20);
  auto o = quick();
  o.iterations = 1;
  auto r = train(tiny(), data, data, o);
  const auto before = r.network.input_weights();
  Rng rng(1);
  const auto a = assign_classes(r.network, data, rng);
  training_loss(r.network, a, data, rng);
  evaluate_accuracy(r.network, a, data, 2, 5);
  predict(r.network, a, data[0], rng);
  EXPECT_EQ(r.network.input_weights(), before);
}

TEST(HarnessProperty, SparseEvaluationDoesNotChangeTraining) {
  const auto data = dataset(60);
  auto dense = quick();
  auto sparse = quick();
  sparse.evaluate_every = 0;
  const auto a = train(tiny(), data, data, dense);
  const auto b = train(tiny(), data, data, sparse);
  EXPECT_EQ(a.network, b.network);
  ASSERT_EQ(b.metrics.size(), 1u);
  EXPECT_EQ(a.metrics.back().testing_accuracy, b.metrics.back().testing_accuracy);
}

TEST(Harness, EmptyTestSetGivesNan) {
  const auto data = dataset(40);
  auto o = quick();
  o.iterations = 1;
  const auto r = train(tiny(), data, {}, o);
  EXPECT_TRUE(std::isnan(r.metrics[0].testing_accuracy));
}
