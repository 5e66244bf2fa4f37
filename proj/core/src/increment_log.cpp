#include "stdpgen/increment_log.hpp"

#include <cmath>

#include "stdpgen/errors.hpp"

namespace stdpgen {

struct IncrementLog::Group final : UpdateSink {
  Group(std::size_t cap, std::uint64_t seed) : capacity(cap), rng(seed) {}

  void add(double delta) {
    if (!std::isfinite(delta)) throw InvalidArgument("increment log: non-finite sample");
    ++seen;
    if (samples.size() < capacity) {
      samples.push_back(delta);
      return;
    }
    std::uniform_int_distribution<std::uint64_t> pick(0, seen - 1);
    const auto k = pick(rng);
    if (k < capacity) samples[k] = delta;
  }

  void record(std::size_t, std::size_t, double delta) override { add(delta); }

  std::size_t capacity;
  Rng rng;
  std::uint64_t seen = 0;
  std::vector<double> samples;
};

IncrementLog::IncrementLog(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), seed_(seed) {
  if (capacity_ == 0) throw InvalidArgument("increment log capacity must be positive");
}

IncrementLog::IncrementLog(IncrementLog&&) noexcept = default;
IncrementLog& IncrementLog::operator=(IncrementLog&&) noexcept = default;
IncrementLog::~IncrementLog() = default;

IncrementLog::Group& IncrementLog::group(const std::string& name) {
  auto it = groups_.find(name);
  if (it == groups_.end()) {
    const auto tag = std::hash<std::string>{}(name);
    it = groups_.emplace(name, std::make_unique<Group>(capacity_, derive_seed(seed_, {stream::kIncrementReservoir, tag})))
             .first;
  }
  return *it->second;
}

void IncrementLog::record(const std::string& g, double delta) { group(g).add(delta); }

UpdateSink& IncrementLog::sink(const std::string& g) { return group(g); }

bool IncrementLog::has_group(const std::string& g) const { return groups_.contains(g); }

std::vector<std::string> IncrementLog::group_names() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : groups_) names.push_back(name);
  return names;
}

const std::vector<double>& IncrementLog::samples(const std::string& g) const {
  auto it = groups_.find(g);
  if (it == groups_.end()) throw InvalidArgument("increment log: unknown group '" + g + "'");
  return it->second->samples;
}

std::uint64_t IncrementLog::events_seen(const std::string& g) const {
  auto it = groups_.find(g);
  return it == groups_.end() ? 0 : it->second->seen;
}

void IncrementLog::clear() { groups_.clear(); }

}  // namespace stdpgen
