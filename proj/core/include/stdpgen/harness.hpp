#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stdpgen/encoding.hpp"
#include "stdpgen/idx.hpp"
#include "stdpgen/increment_log.hpp"
#include "stdpgen/topology.hpp"

namespace stdpgen {

inline constexpr std::size_t kNumClasses = 10;
using ClassScores = std::array<double, kNumClasses>;

struct Metrics {
  std::size_t iteration = 0;
  double training_loss = 0.0;
  double training_accuracy = 0.0;
  double testing_accuracy = 0.0;
  double testing_accuracy_std = 0.0;
  /// training_accuracy - testing_accuracy, percentage points.
  double generalization_error = 0.0;
  /// Only set on the final iteration.
  std::optional<double> bg_index;
  double wall_time_s = 0.0;
};

struct ClassAssignment {
  std::vector<std::uint8_t> labels;  // one per excitatory neuron

  bool operator==(const ClassAssignment&) const = default;
};

/// Spike counts of the excitatory layer for one presented sample.
struct Response {
  std::vector<std::uint32_t> counts;
  std::uint8_t label = 0;
};

/// Argmax of a score vector; ties go to the lowest class id.
std::uint8_t argmax_class(const ClassScores& scores);

/// Label of each neuron = class with the highest mean count over `responses`.
/// Classes absent from `responses` score 0.
ClassAssignment assign_from_responses(std::span<const Response> responses, std::size_t n_neurons);

/// Mean count per class over the neurons assigned to it (0 when none are).
ClassScores class_mean_counts(const ClassAssignment& a, std::span<const std::uint32_t> counts);

/// Total count per class over the neurons assigned to it.
ClassScores class_total_counts(const ClassAssignment& a, std::span<const std::uint32_t> counts);

std::uint8_t predict_from_counts(const ClassAssignment& a, std::span<const std::uint32_t> counts);

/// -ln p[label] where p is the class counts divided by their maximum and then
/// renormalised with an additive floor `eps` per class. All-zero counts give
/// the uniform distribution.
double cross_entropy_from_counts(const ClassScores& counts, std::uint8_t label, double eps = 1e-9);

struct EvalOptions {
  RetryOptions retry{.plasticity = Plasticity::kOff};
  /// Per-sample pixel-sum normalisation target; 0 leaves images untouched.
  double normalize_sum = 0.0;
};

/// Presents each sample frozen (with retry and rest) and records its counts.
std::vector<Response> collect_responses(SpikingModel& model, std::span<const ImageSample> samples, Rng& rng,
                                        const EvalOptions& opts = {});

ClassAssignment assign_classes(SpikingModel& model, std::span<const ImageSample> samples, Rng& rng,
                               const EvalOptions& opts = {});

std::uint8_t predict(SpikingModel& model, const ClassAssignment& a, const ImageSample& sample, Rng& rng,
                     const EvalOptions& opts = {});

/// Mean cross-entropy of the per-class total counts over `responses`.
double training_loss(const ClassAssignment& a, std::span<const Response> responses);

double training_loss(SpikingModel& model, const ClassAssignment& a, std::span<const ImageSample> samples, Rng& rng,
                     const EvalOptions& opts = {});

/// Percentage of responses whose predicted class matches the label.
double accuracy_from_responses(const ClassAssignment& a, std::span<const Response> responses);

struct AccuracyStats {
  double mean = 0.0;
  /// Sample standard deviation across repeats; 0 when repeats == 1.
  double std = 0.0;
  std::vector<double> runs;
};

using Predictor = std::function<std::uint8_t(const ImageSample&, Rng&)>;

/// Accuracy (%) over `repeats` passes, each in a fresh random order with a
/// fresh rng stream derived from `seed`.
AccuracyStats evaluate_accuracy(const Predictor& predictor, std::span<const ImageSample> samples, std::size_t repeats,
                                std::uint64_t seed);

AccuracyStats evaluate_accuracy(SpikingModel& model, const ClassAssignment& a, std::span<const ImageSample> samples,
                                std::size_t repeats, std::uint64_t seed, const EvalOptions& opts = {});

struct TrainOptions {
  std::size_t iterations = 10;
  std::size_t samples_per_iteration = 600;
  /// Training-set samples (drawn from those seen so far) used for class
  /// assignment, training accuracy and loss. 0 uses every seen sample.
  std::size_t train_eval_samples = 1000;
  /// Test samples used per evaluation; 0 uses the whole test set.
  std::size_t test_eval_samples = 0;
  std::size_t test_repeats = 1;
  /// Evaluate after every this many iterations; 0 evaluates only after the
  /// final one. The final iteration is always evaluated.
  std::size_t evaluate_every = 1;
  std::size_t reservoir_capacity = std::size_t{1} << 21;
  /// Tail-estimator block size; 0 picks floor(sqrt(N)).
  std::size_t tail_k1 = 0;
  double normalize_sum = 0.0;
  RetryOptions retry{};
  std::function<void(const Metrics&)> on_metrics;
};

struct TrainResult {
  Network network;
  std::vector<Metrics> metrics;
  /// Weight increments of the final training iteration.
  IncrementLog increments;
  ClassAssignment assignment;
};

/// Shuffles `train_set` with cfg.seed, then trains for opts.iterations
/// iterations of opts.samples_per_iteration plastic presentations each,
/// evaluating frozen after each iteration. `test_set` may be empty.
/// Throws InvalidArgument when the training set is too small.
TrainResult train(const NetworkConfig& cfg, std::span<const ImageSample> train_set,
                  std::span<const ImageSample> test_set, const TrainOptions& opts);

}  // namespace stdpgen
