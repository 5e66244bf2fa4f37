#include "stdpgen/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stdpgen/errors.hpp"

namespace stdpgen {

double pixel_to_rate(double intensity, int boost_level) {
  if (intensity <= 0.0) return 0.0;
  return intensity / kRateDivisor + kBoostStepHz * static_cast<double>(boost_level);
}

std::vector<double> image_rates(const ImageSample& sample, int boost_level) {
  std::vector<double> rates(sample.pixels.size());
  std::transform(sample.pixels.begin(), sample.pixels.end(), rates.begin(),
                 [boost_level](float px) { return pixel_to_rate(px, boost_level); });
  return rates;
}

SpikeSchedule poisson_schedule(std::span<const double> rates_hz, double duration_ms, double dt_ms, Rng& rng) {
  if (dt_ms <= 0) throw InvalidArgument("poisson_schedule: dt must be > 0");
  const auto bins = static_cast<std::int64_t>(std::llround(duration_ms / dt_ms));
  SpikeSchedule out;
  for (std::size_t i = 0; i < rates_hz.size(); ++i) {
    const double rate = rates_hz[i];
    if (rate < 0) throw InvalidArgument("poisson_schedule: negative rate at input " + std::to_string(i));
    const double p = std::min(1.0, rate * dt_ms / 1000.0);
    if (p <= 0.0) continue;
    const auto input = static_cast<std::uint32_t>(i);
    if (p >= 1.0) {
      for (std::int64_t k = 0; k < bins; ++k) out.push_back({(static_cast<double>(k) + 0.5) * dt_ms, input});
      continue;
    }
    // Gaps between successes of per-bin Bernoulli trials are geometric.
    std::geometric_distribution<std::int64_t> gap(p);
    for (std::int64_t k = gap(rng); k < bins; k += 1 + gap(rng))
      out.push_back({(static_cast<double>(k) + 0.5) * dt_ms, input});
  }
  std::sort(out.begin(), out.end(), [](const InputSpike& a, const InputSpike& b) {
    return a.time_ms != b.time_ms ? a.time_ms < b.time_ms : a.input < b.input;
  });
  return out;
}

PresentationResult present_with_retry(SpikingModel& model, const ImageSample& sample, Rng& rng,
                                      const RetryOptions& opts) {
  if (std::none_of(sample.pixels.begin(), sample.pixels.end(), [](float px) { return px > 0.0f; }))
    throw EncodingFailure("all-zero image cannot drive the network");

  for (int boost = 0;; ++boost) {
    if (boost > opts.max_boost)
      throw EncodingFailure("fewer than " + std::to_string(opts.min_spikes) + " spikes at boost level " +
                            std::to_string(opts.max_boost));
    if (boost > 0) model.rest(opts.rest_ms);
    const auto rates = image_rates(sample, boost);
    const auto schedule = poisson_schedule(rates, opts.duration_ms, model.dt(), rng);
    auto result = model.present(schedule, opts.duration_ms, opts.plasticity, opts.log);
    if (result.total_exc_spikes >= opts.min_spikes) {
      result.boost_level = boost;
      return result;
    }
  }
}

ImageSample normalize_sample(const ImageSample& sample, double target_sum) {
  const double sum = std::accumulate(sample.pixels.begin(), sample.pixels.end(), 0.0);
  if (sum <= 0.0) throw InvalidArgument("normalize_sample: image has zero pixel sum");
  const double scale = target_sum / sum;
  ImageSample out = sample;
  for (auto& px : out.pixels) px = static_cast<float>(std::min(255.0, px * scale));
  return out;
}

}  // namespace stdpgen
