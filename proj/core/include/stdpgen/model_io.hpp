#pragma once

#include <filesystem>

#include "stdpgen/harness.hpp"
#include "stdpgen/topology.hpp"

namespace stdpgen {

/// Learned state of a trained network: input weights, adaptive thresholds
/// and the class assignment.
struct TrainedModel {
  std::size_t n_input = 0;
  std::size_t n_exc = 0;
  std::vector<double> weights;  // n_input x n_exc, row-major
  std::vector<double> theta;
  ClassAssignment assignment;

  bool operator==(const TrainedModel&) const = default;
};

TrainedModel capture_model(const Network& net, const ClassAssignment& assignment);

/// Rebuilds a network from `cfg` and overwrites its learned state. Throws
/// InvalidArgument when the dimensions disagree.
Network restore_network(const NetworkConfig& cfg, const TrainedModel& model);

/// Gzip-compressed binary container; little-endian doubles.
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace stdpgen
