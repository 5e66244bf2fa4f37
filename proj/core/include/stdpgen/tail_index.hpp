#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "stdpgen/increment_log.hpp"

namespace stdpgen {

/// Tail index of a symmetric stable-like sample from block sums.
///
/// Samples are centred on the median of 31 contiguous group means and the first K1*K2 of them are split
/// into K2 consecutive blocks of K1. With Y_j the block sums,
///   1/alpha = (mean_j ln|Y_j| - mean_i ln|X_i|) / ln K1
/// and the result is clamped to (0, 2]. Exact zeros are left out of both
/// log-means. `k1 == 0` selects floor(sqrt(N)).
///
/// Throws EstimationError when N < 2*K1, K1 < 2, or every sample is zero
/// after centring.
double estimate_tail_index(std::span<const double> samples, std::size_t k1 = 0);

/// Maximum of the per-group tail indices. Throws EstimationError when empty.
double bg_index(std::span<const double> group_alphas);

struct TailEstimate {
  std::map<std::string, double> alpha_hat;
  std::map<std::string, std::size_t> sample_counts;
  double bg_index = 0.0;
};

/// Per-group tail indices of an increment log and their maximum.
TailEstimate estimate_bg_index(const IncrementLog& log, std::size_t k1 = 0);

}  // namespace stdpgen
