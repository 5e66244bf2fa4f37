#include "stdpgen/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stdpgen/errors.hpp"

namespace stdpgen {

bool ParamDomain::contains(double x) const noexcept {
  if (!std::isfinite(x) || x > hi) return false;
  if (lo_open ? x <= lo : x < lo) return false;
  return !integer || x == std::round(x);
}

SearchSpace::SearchSpace(std::vector<ParamDomain> domains) : domains_(std::move(domains)) {
  if (domains_.empty()) throw InvalidArgument("search space needs at least one parameter");
  std::set<std::string> names;
  for (const auto& d : domains_) {
    if (!names.insert(d.name).second) throw InvalidArgument("duplicate parameter '" + d.name + "'");
    if (!(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo <= d.hi))
      throw InvalidArgument("parameter '" + d.name + "' has an empty domain");
    if (d.lo_open && d.lo == d.hi) throw InvalidArgument("parameter '" + d.name + "' has an empty domain");
    if (d.integer && std::ceil(d.min_value()) > std::floor(d.hi))
      throw InvalidArgument("integer parameter '" + d.name + "' has no integer in its domain");
  }
}

SearchSpace SearchSpace::stdp_default() {
  return SearchSpace({
      {"eta", 0.05, 0.2},
      {"sigma", 0.1, 1.0},
      {"s_sat", 1, 10, true},
      {"gamma_decay", 10, 100, true},
      {"w0", 0.0, 1.0, false, true},
      {"c_plus", 0.0, 1.0, false, true},
      {"c_minus", 0.0, 1.0, false, true},
      {"tau_plus", 10.0, 20.0},
      {"tau_minus", 20.0, 40.0},
  });
}

std::size_t SearchSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < domains_.size(); ++i)
    if (domains_[i].name == name) return i;
  throw InvalidArgument("unknown parameter '" + name + "'");
}

const ParamDomain* SearchSpace::find(const std::string& name) const noexcept {
  for (const auto& d : domains_)
    if (d.name == name) return &d;
  return nullptr;
}

ParamVector SearchSpace::snap(const ParamVector& x) const {
  if (x.size() != dims()) throw InvalidArgument("parameter vector has wrong dimension");
  ParamVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& d = domains_[i];
    double v = std::clamp(x[i], d.min_value(), d.hi);
    if (d.integer) v = std::clamp(std::round(v), std::ceil(d.min_value()), std::floor(d.hi));
    out[i] = v;
  }
  return out;
}

bool SearchSpace::contains(const ParamVector& x) const {
  if (x.size() != dims()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!domains_[i].contains(x[i])) return false;
  return true;
}

ParamVector SearchSpace::to_unit(const ParamVector& x) const {
  if (x.size() != dims()) throw InvalidArgument("parameter vector has wrong dimension");
  ParamVector u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& d = domains_[i];
    u[i] = d.hi > d.lo ? (x[i] - d.lo) / (d.hi - d.lo) : 0.5;
  }
  return u;
}

ParamVector SearchSpace::from_unit(const ParamVector& u) const {
  if (u.size() != dims()) throw InvalidArgument("unit vector has wrong dimension");
  ParamVector x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = domains_[i].lo + u[i] * (domains_[i].hi - domains_[i].lo);
  return snap(x);
}

ParamVector SearchSpace::sample_uniform(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ParamVector u(dims());
  for (auto& v : u) v = unif(rng);
  return from_unit(u);
}

namespace {
double* stdp_field(StdpConfig& cfg, const std::string& name) {
  if (name == "eta") return &cfg.eta;
  if (name == "sigma") return &cfg.sigma;
  if (name == "s_sat") return &cfg.s_sat;
  if (name == "gamma_decay") return &cfg.gamma_decay;
  if (name == "w0") return &cfg.w0;
  if (name == "c_plus") return &cfg.c_plus;
  if (name == "c_minus") return &cfg.c_minus;
  if (name == "tau_plus") return &cfg.tau_plus;
  if (name == "tau_minus") return &cfg.tau_minus;
  return nullptr;
}
}  // namespace

void apply_params(const SearchSpace& space, const ParamVector& x, StdpConfig& cfg) {
  if (x.size() != space.dims()) throw InvalidArgument("parameter vector has wrong dimension");
  for (std::size_t i = 0; i < x.size(); ++i) {
    double* f = stdp_field(cfg, space[i].name);
    if (!f) throw InvalidArgument("'" + space[i].name + "' is not an STDP parameter");
    *f = x[i];
  }
}

ParamVector extract_params(const SearchSpace& space, const StdpConfig& cfg) {
  StdpConfig copy = cfg;
  ParamVector x(space.dims());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double* f = stdp_field(copy, space[i].name);
    if (!f) throw InvalidArgument("'" + space[i].name + "' is not an STDP parameter");
    x[i] = *f;
  }
  return x;
}

}  // namespace stdpgen
