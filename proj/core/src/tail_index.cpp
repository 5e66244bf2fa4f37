#include "stdpgen/tail_index.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "stdpgen/errors.hpp"

namespace stdpgen {

namespace {

constexpr std::size_t kCentreGroups = 31;

double median_of_means(std::span<const double> x) {
  const std::size_t groups = std::min(kCentreGroups, x.size());
  const std::size_t per = x.size() / groups;
  std::vector<double> means(groups, 0.0);
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t i = g * per; i < (g + 1) * per; ++i) means[g] += x[i];
    means[g] /= static_cast<double>(per);
  }
  std::nth_element(means.begin(), means.begin() + static_cast<std::ptrdiff_t>(groups / 2), means.end());
  return means[groups / 2];
}

}  // namespace

double estimate_tail_index(std::span<const double> samples, std::size_t k1) {
  const std::size_t n_all = samples.size();
  if (k1 == 0) k1 = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_all))));
  if (k1 < 2) throw EstimationError("tail index: block size K1 must be >= 2");
  if (n_all < 2 * k1)
    throw EstimationError("tail index: need at least " + std::to_string(2 * k1) + " samples, got " +
                          std::to_string(n_all));

  const std::size_t k2 = n_all / k1;
  const double centre = median_of_means(samples);

  double sum_log_x = 0.0;
  std::size_t nonzero_x = 0;
  double sum_log_y = 0.0;
  std::size_t nonzero_y = 0;
  for (std::size_t j = 0; j < k2; ++j) {
    double y = 0.0;
    for (std::size_t i = j * k1; i < (j + 1) * k1; ++i) {
      const double x = samples[i] - centre;
      y += x;
      if (x != 0.0) {
        sum_log_x += std::log(std::abs(x));
        ++nonzero_x;
      }
    }
    if (y != 0.0) {
      sum_log_y += std::log(std::abs(y));
      ++nonzero_y;
    }
  }
  if (nonzero_x == 0 || nonzero_y == 0) throw EstimationError("tail index: samples are all zero after centring");

  const double inv_alpha =
      (sum_log_y / static_cast<double>(nonzero_y) - sum_log_x / static_cast<double>(nonzero_x)) /
      std::log(static_cast<double>(k1));
  if (!(inv_alpha > 0.5)) return 2.0;
  return 1.0 / inv_alpha;
}

double bg_index(std::span<const double> group_alphas) {
  if (group_alphas.empty()) throw EstimationError("BG index needs at least one group");
  return *std::max_element(group_alphas.begin(), group_alphas.end());
}

TailEstimate estimate_bg_index(const IncrementLog& log, std::size_t k1) {
  TailEstimate est;
  std::vector<double> alphas;
  for (const auto& name : log.group_names()) {
    const auto& s = log.samples(name);
    const double a = estimate_tail_index(s, k1);
    est.alpha_hat[name] = a;
    est.sample_counts[name] = s.size();
    alphas.push_back(a);
  }
  est.bg_index = bg_index(alphas);
  return est;
}

}  // namespace stdpgen
