#include "stdpgen/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "stdpgen/errors.hpp"
#include "stdpgen/tail_index.hpp"

namespace stdpgen {

std::uint8_t argmax_class(const ClassScores& scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c)
    if (scores[c] > scores[best]) best = c;
  return static_cast<std::uint8_t>(best);
}

ClassAssignment assign_from_responses(std::span<const Response> responses, std::size_t n_neurons) {
  std::vector<ClassScores> sums(n_neurons, ClassScores{});
  std::array<std::size_t, kNumClasses> seen{};
  for (const auto& r : responses) {
    if (r.label >= kNumClasses) throw InvalidArgument("response label out of range");
    if (r.counts.size() != n_neurons) throw InvalidArgument("response has wrong neuron count");
    ++seen[r.label];
    for (std::size_t j = 0; j < n_neurons; ++j) sums[j][r.label] += r.counts[j];
  }
  ClassAssignment a;
  a.labels.resize(n_neurons);
  for (std::size_t j = 0; j < n_neurons; ++j) {
    ClassScores mean{};
    for (std::size_t c = 0; c < kNumClasses; ++c)
      mean[c] = seen[c] ? sums[j][c] / static_cast<double>(seen[c]) : 0.0;
    a.labels[j] = argmax_class(mean);
  }
  return a;
}

ClassScores class_total_counts(const ClassAssignment& a, std::span<const std::uint32_t> counts) {
  if (counts.size() != a.labels.size()) throw InvalidArgument("counts do not match the class assignment");
  ClassScores total{};
  for (std::size_t j = 0; j < counts.size(); ++j) total[a.labels[j]] += counts[j];
  return total;
}

ClassScores class_mean_counts(const ClassAssignment& a, std::span<const std::uint32_t> counts) {
  ClassScores total = class_total_counts(a, counts);
  std::array<std::size_t, kNumClasses> members{};
  for (auto l : a.labels) ++members[l];
  for (std::size_t c = 0; c < kNumClasses; ++c) total[c] = members[c] ? total[c] / static_cast<double>(members[c]) : 0.0;
  return total;
}

std::uint8_t predict_from_counts(const ClassAssignment& a, std::span<const std::uint32_t> counts) {
  return argmax_class(class_mean_counts(a, counts));
}

double cross_entropy_from_counts(const ClassScores& counts, std::uint8_t label, double eps) {
  if (label >= kNumClasses) throw InvalidArgument("label out of range");
  const double mx = *std::max_element(counts.begin(), counts.end());
  ClassScores p{};
  double sum = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    p[c] = (mx > 0.0 ? counts[c] / mx : 0.0) + eps;
    sum += p[c];
  }
  if (!(sum > 0.0)) return std::log(static_cast<double>(kNumClasses));
  return -std::log(p[label] / sum);
}

namespace {

PresentationResult present_frozen(SpikingModel& model, const ImageSample& sample, Rng& rng, const EvalOptions& opts) {
  RetryOptions retry = opts.retry;
  retry.plasticity = Plasticity::kOff;
  retry.log = nullptr;
  PresentationResult r = opts.normalize_sum > 0.0
                             ? present_with_retry(model, normalize_sample(sample, opts.normalize_sum), rng, retry)
                             : present_with_retry(model, sample, rng, retry);
  model.rest(retry.rest_ms);
  return r;
}

}  // namespace

std::vector<Response> collect_responses(SpikingModel& model, std::span<const ImageSample> samples, Rng& rng,
                                        const EvalOptions& opts) {
  std::vector<Response> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({present_frozen(model, s, rng, opts).exc_counts, s.label});
  return out;
}

ClassAssignment assign_classes(SpikingModel& model, std::span<const ImageSample> samples, Rng& rng,
                               const EvalOptions& opts) {
  const auto responses = collect_responses(model, samples, rng, opts);
  return assign_from_responses(responses, model.n_exc());
}

std::uint8_t predict(SpikingModel& model, const ClassAssignment& a, const ImageSample& sample, Rng& rng,
                     const EvalOptions& opts) {
  return predict_from_counts(a, present_frozen(model, sample, rng, opts).exc_counts);
}

double training_loss(const ClassAssignment& a, std::span<const Response> responses) {
  if (responses.empty()) return 0.0;
  double total = 0.0;
  for (const auto& r : responses) total += cross_entropy_from_counts(class_total_counts(a, r.counts), r.label);
  return total / static_cast<double>(responses.size());
}

double training_loss(SpikingModel& model, const ClassAssignment& a, std::span<const ImageSample> samples, Rng& rng,
                     const EvalOptions& opts) {
  const auto responses = collect_responses(model, samples, rng, opts);
  return training_loss(a, responses);
}

double accuracy_from_responses(const ClassAssignment& a, std::span<const Response> responses) {
  if (responses.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& r : responses) hits += predict_from_counts(a, r.counts) == r.label;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(responses.size());
}

namespace {

AccuracyStats summarize(std::vector<double> runs) {
  AccuracyStats st;
  st.runs = std::move(runs);
  if (st.runs.empty()) return st;
  const double n = static_cast<double>(st.runs.size());
  st.mean = std::accumulate(st.runs.begin(), st.runs.end(), 0.0) / n;
  if (st.runs.size() > 1) {
    double ss = 0.0;
    for (double x : st.runs) ss += (x - st.mean) * (x - st.mean);
    st.std = std::sqrt(ss / (n - 1.0));
  }
  return st;
}

}  // namespace

AccuracyStats evaluate_accuracy(const Predictor& predictor, std::span<const ImageSample> samples, std::size_t repeats,
                                std::uint64_t seed) {
  if (repeats == 0) throw InvalidArgument("evaluate_accuracy: repeats must be >= 1");
  std::vector<double> runs;
  std::vector<std::size_t> order(samples.size());
  for (std::size_t r = 0; r < repeats; ++r) {
    Rng rng = make_rng(derive_seed(seed, {stream::kEvaluation, r}));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t hits = 0;
    for (auto i : order) hits += predictor(samples[i], rng) == samples[i].label;
    runs.push_back(samples.empty() ? 0.0 : 100.0 * static_cast<double>(hits) / static_cast<double>(samples.size()));
  }
  return summarize(std::move(runs));
}

AccuracyStats evaluate_accuracy(SpikingModel& model, const ClassAssignment& a, std::span<const ImageSample> samples,
                                std::size_t repeats, std::uint64_t seed, const EvalOptions& opts) {
  return evaluate_accuracy([&](const ImageSample& s, Rng& rng) { return predict(model, a, s, rng, opts); }, samples,
                           repeats, seed);
}

TrainResult train(const NetworkConfig& cfg, std::span<const ImageSample> train_set,
                  std::span<const ImageSample> test_set, const TrainOptions& opts) {
  const std::size_t needed = opts.iterations * opts.samples_per_iteration;
  if (train_set.size() < needed)
    throw InvalidArgument("training set has " + std::to_string(train_set.size()) + " samples, " +
                          std::to_string(opts.iterations) + " iterations need " + std::to_string(needed));
  if (opts.test_repeats == 0) throw InvalidArgument("test_repeats must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  TrainResult res{Network(cfg), {}, IncrementLog(opts.reservoir_capacity, cfg.seed), {}};
  if (opts.iterations == 0) return res;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng = make_rng(derive_seed(cfg.seed, {stream::kShuffle}));
  std::shuffle(order.begin(), order.end(), shuffle_rng);
  Rng enc_rng = make_rng(derive_seed(cfg.seed, {stream::kEncoding}));

  const std::size_t n_test = opts.test_eval_samples == 0 ? test_set.size()
                                                         : std::min(opts.test_eval_samples, test_set.size());
  const auto test_subset = test_set.first(n_test);
  EvalOptions eval_opts;
  eval_opts.retry = opts.retry;
  eval_opts.normalize_sum = opts.normalize_sum;

  Network& net = res.network;
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    const bool last = it + 1 == opts.iterations;
    RetryOptions retry = opts.retry;
    retry.plasticity = Plasticity::kOn;
    retry.log = nullptr;
    if (last) {
      res.increments.set_iteration(it + 1);
      retry.log = &res.increments;
    }
    for (std::size_t k = 0; k < opts.samples_per_iteration; ++k) {
      const ImageSample& raw = train_set[order[it * opts.samples_per_iteration + k]];
      if (opts.normalize_sum > 0.0)
        present_with_retry(net, normalize_sample(raw, opts.normalize_sum), enc_rng, retry);
      else
        present_with_retry(net, raw, enc_rng, retry);
      net.rest(retry.rest_ms);
    }

    const bool evaluate = last || (opts.evaluate_every > 0 && (it + 1) % opts.evaluate_every == 0);
    if (!evaluate) continue;

    // Evaluate a copy so the training trajectory does not depend on how
    // often metrics are taken.
    Network probe = net;
    Rng eval_rng = make_rng(derive_seed(cfg.seed, {stream::kEvaluation, it}));
    const std::size_t seen = (it + 1) * opts.samples_per_iteration;
    std::vector<std::size_t> pick(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(seen));
    if (opts.train_eval_samples > 0 && opts.train_eval_samples < seen) {
      std::vector<std::size_t> sub;
      std::sample(pick.begin(), pick.end(), std::back_inserter(sub), opts.train_eval_samples, eval_rng);
      pick = std::move(sub);
    }
    std::vector<ImageSample> train_eval;
    train_eval.reserve(pick.size());
    for (auto i : pick) train_eval.push_back(train_set[i]);

    const auto responses = collect_responses(probe, train_eval, eval_rng, eval_opts);
    res.assignment = assign_from_responses(responses, probe.n_exc());

    Metrics m;
    m.iteration = it + 1;
    m.training_accuracy = accuracy_from_responses(res.assignment, responses);
    m.training_loss = training_loss(res.assignment, responses);
    if (test_subset.empty()) {
      m.testing_accuracy = std::numeric_limits<double>::quiet_NaN();
    } else {
      const auto st = evaluate_accuracy(probe, res.assignment, test_subset, opts.test_repeats,
                                        derive_seed(cfg.seed, {stream::kEvaluation, it, 1u}), eval_opts);
      m.testing_accuracy = st.mean;
      m.testing_accuracy_std = st.std;
    }
    m.generalization_error = m.training_accuracy - m.testing_accuracy;
    if (last) {
      try {
        m.bg_index = estimate_bg_index(res.increments, opts.tail_k1).bg_index;
      } catch (const EstimationError&) {
        m.bg_index.reset();
      }
    }
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.metrics.push_back(m);
    if (opts.on_metrics) opts.on_metrics(m);
  }
  return res;
}

}  // namespace stdpgen
