#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stdpgen/plasticity.hpp"
#include "stdpgen/rng.hpp"

namespace stdpgen {

/// Weight-increment samples, one sequence per parameter group.
///
/// Each group keeps at most `capacity` samples. Once a group has seen more
/// events than that, it holds a uniform random subset of everything recorded
/// (reservoir sampling), so memory stays bounded for long iterations.
class IncrementLog {
 public:
  static constexpr std::size_t kDefaultCapacity = std::size_t{1} << 21;

  explicit IncrementLog(std::size_t capacity = kDefaultCapacity, std::uint64_t seed = 0);

  IncrementLog(IncrementLog&&) noexcept;
  IncrementLog& operator=(IncrementLog&&) noexcept;
  ~IncrementLog();

  /// Throws InvalidArgument for non-finite values.
  void record(const std::string& group, double delta);

  /// Sink feeding `group`; stays valid for the lifetime of the log.
  UpdateSink& sink(const std::string& group);

  bool has_group(const std::string& group) const;
  std::vector<std::string> group_names() const;
  /// Throws InvalidArgument for unknown groups.
  const std::vector<double>& samples(const std::string& group) const;
  /// Events recorded into the group, including ones not retained.
  std::uint64_t events_seen(const std::string& group) const;

  void clear();

  std::size_t capacity() const noexcept { return capacity_; }
  int iteration() const noexcept { return iteration_; }
  void set_iteration(int it) noexcept { iteration_ = it; }

 private:
  struct Group;
  Group& group(const std::string& name);

  std::size_t capacity_;
  std::uint64_t seed_;
  int iteration_ = -1;
  std::map<std::string, std::unique_ptr<Group>> groups_;
};

}  // namespace stdpgen
