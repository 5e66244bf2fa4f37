#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stdpgen/plasticity.hpp"
#include "stdpgen/rng.hpp"

namespace stdpgen {

struct ParamDomain {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  bool integer = false;
  /// Open lower end: values are kept at least lo + 1e-3 * (hi - lo).
  bool lo_open = false;

  double min_value() const noexcept { return lo_open ? lo + 1e-3 * (hi - lo) : lo; }
  bool contains(double x) const noexcept;
  bool operator==(const ParamDomain&) const = default;
};

using ParamVector = std::vector<double>;

class SearchSpace {
 public:
  SearchSpace() = default;
  /// Throws InvalidArgument for empty or inverted domains, integer domains
  /// without an integer, or duplicate names.
  explicit SearchSpace(std::vector<ParamDomain> domains);

  /// eta [0.05, 0.2], sigma [0.1, 1], s_sat {1..10}, gamma_decay {10..100},
  /// w0 (0, 1], c_plus (0, 1], c_minus (0, 1], tau_plus [10, 20],
  /// tau_minus [20, 40].
  static SearchSpace stdp_default();

  std::size_t dims() const noexcept { return domains_.size(); }
  const std::vector<ParamDomain>& domains() const noexcept { return domains_; }
  const ParamDomain& operator[](std::size_t i) const { return domains_[i]; }
  /// Index of `name`; throws InvalidArgument when absent.
  std::size_t index_of(const std::string& name) const;
  const ParamDomain* find(const std::string& name) const noexcept;

  /// Clamps into the domains and rounds integer coordinates.
  ParamVector snap(const ParamVector& x) const;
  bool contains(const ParamVector& x) const;

  /// Min-max map to and from [0, 1]^d. from_unit snaps the result.
  ParamVector to_unit(const ParamVector& x) const;
  ParamVector from_unit(const ParamVector& u) const;

  ParamVector sample_uniform(Rng& rng) const;

  bool operator==(const SearchSpace&) const = default;

 private:
  std::vector<ParamDomain> domains_;
};

/// Writes the named parameters into an STDP config. Throws InvalidArgument
/// for names that are not STDP fields.
void apply_params(const SearchSpace& space, const ParamVector& x, StdpConfig& cfg);

/// Reads the named parameters out of an STDP config.
ParamVector extract_params(const SearchSpace& space, const StdpConfig& cfg);

}  // namespace stdpgen
