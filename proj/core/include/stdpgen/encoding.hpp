#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stdpgen/rng.hpp"
#include "stdpgen/topology.hpp"

namespace stdpgen {

inline constexpr std::size_t kImageSide = 28;
inline constexpr std::size_t kImagePixels = kImageSide * kImageSide;

/// Grey-level image with intensities in [0, 255] and a class id in 0..9.
struct ImageSample {
  std::vector<float> pixels;
  std::uint8_t label = 0;

  bool operator==(const ImageSample&) const = default;
};

inline constexpr double kRateDivisor = 4.0;     // 255 -> 63.75 Hz
inline constexpr double kBoostStepHz = 32.0;

/// intensity / 4 + 32 * boost_level Hz. Zero-intensity pixels stay silent at
/// every boost level.
double pixel_to_rate(double intensity, int boost_level);

std::vector<double> image_rates(const ImageSample& sample, int boost_level);

/// Bernoulli-per-bin Poisson approximation: in each bin of width dt every
/// input fires with probability min(1, rate * dt / 1000). Spikes are stamped
/// at bin centres and sorted by (time, input).
SpikeSchedule poisson_schedule(std::span<const double> rates_hz, double duration_ms, double dt_ms, Rng& rng);

struct RetryOptions {
  double duration_ms = 350.0;
  double rest_ms = 150.0;
  std::uint64_t min_spikes = 5;
  int max_boost = 8;
  Plasticity plasticity = Plasticity::kOn;
  IncrementLog* log = nullptr;
};

/// Presents `sample`, raising the boost level and presenting again (after a
/// rest) until the excitatory layer fires at least min_spikes times. The
/// returned result is the final presentation, with its boost level set.
/// Throws EncodingFailure for an all-zero image or when the boost would
/// exceed max_boost.
PresentationResult present_with_retry(SpikingModel& model, const ImageSample& sample, Rng& rng,
                                      const RetryOptions& opts = {});

/// Mean pixel sum of an MNIST training image; the default target when
/// Fashion-MNIST samples are normalised.
inline constexpr double kMnistMeanPixelSum = 26120.0;

/// Rescales the pixels so they sum to target_sum, clamping at 255.
/// Throws InvalidArgument for an all-zero image.
ImageSample normalize_sample(const ImageSample& sample, double target_sum);

}  // namespace stdpgen
