#include "stdpgen/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "stdpgen/errors.hpp"

namespace stdpgen {

CalibrationConfig CalibrationSettings::to_config(StdpRule rule, std::uint64_t seed) const {
  CalibrationConfig c = CalibrationConfig::defaults(rule);
  c.pools = pools;
  c.per_pool = per_pool;
  c.rate_hz = rate_hz;
  c.correlation = correlation;
  c.duration_ms = duration_ms;
  c.input_gain = input_gain;
  c.w_init = w_init;
  c.stdp.eta = eta;
  c.kde_points = kde_points;
  c.seed = seed;
  return c;
}

double ExperimentConfig::normalize_sum() const {
  if (encoding.normalize_sum >= 0.0) return encoding.normalize_sum;
  return dataset == "fashion" ? kMnistMeanPixelSum : 0.0;
}

TrainOptions ExperimentConfig::train_options() const {
  TrainOptions o;
  o.iterations = training.iterations;
  o.samples_per_iteration = training.samples_per_iteration;
  o.train_eval_samples = training.train_eval_samples;
  o.test_eval_samples = training.test_eval_samples;
  o.test_repeats = training.test_repeats;
  o.evaluate_every = training.evaluate_every;
  o.reservoir_capacity = training.reservoir_capacity;
  o.tail_k1 = training.tail_k1;
  o.normalize_sum = normalize_sum();
  o.retry.duration_ms = encoding.duration_ms;
  o.retry.rest_ms = encoding.rest_ms;
  o.retry.min_spikes = encoding.min_spikes;
  o.retry.max_boost = encoding.max_boost;
  return o;
}

namespace {

void prefixed(const std::string& section, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    if (e.key().find('.') != std::string::npos) throw;
    const std::string what = e.what();
    const auto pos = what.find(": ");
    throw ConfigError(pos == std::string::npos ? what : what.substr(pos + 2), section + "." + e.key());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  prefixed("stdp", [&] { network.stdp.validate(); });
  prefixed("neuron_exc", [&] { network.exc.validate(); });
  prefixed("neuron_inh", [&] { network.inh.validate(); });
  prefixed("network", [&] { network.validate(); });
  if (dataset != "mnist" && dataset != "fashion") throw ConfigError("must be mnist or fashion", "dataset");
  if (jobs == 0) throw ConfigError("must be >= 1", "jobs");
  if (training.samples_per_iteration == 0) throw ConfigError("must be >= 1", "training.samples_per_iteration");
  if (training.test_repeats == 0) throw ConfigError("must be >= 1", "training.test_repeats");
  if (training.reservoir_capacity == 0) throw ConfigError("must be >= 1", "training.reservoir_capacity");
  if (training.tail_k1 == 1) throw ConfigError("must be 0 (automatic) or >= 2", "training.tail_k1");
  if (!(encoding.duration_ms > 0)) throw ConfigError("must be > 0", "encoding.duration_ms");
  if (!(encoding.rest_ms >= 0)) throw ConfigError("must be >= 0", "encoding.rest_ms");
  if (encoding.max_boost < 0) throw ConfigError("must be >= 0", "encoding.max_boost");
  if (sweep.rules.empty()) throw ConfigError("needs at least one rule", "sweep.rules");
  if (sweep.seeds.empty()) throw ConfigError("needs at least one seed", "sweep.seeds");
  prefixed("calibration", [&] { calibration.to_config(StdpRule::kLog, 1).validate(); });
  if (bo.initial_points == 0) throw ConfigError("must be >= 1", "bo.initial_points");
  if (bo.budget < bo.initial_points) throw ConfigError("must be >= bo.initial_points", "bo.budget");
  if (bo.k_folds == 0) throw ConfigError("must be >= 1", "bo.k_folds");
  if (bo.candidates == 0) throw ConfigError("must be >= 1", "bo.candidates");
  if (bo.enabled) {
    StdpConfig probe = network.stdp;
    const ParamVector x = extract_params(bo.space, probe);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& d = bo.space[i];
      if (!d.contains(x[i])) {
        std::ostringstream msg;
        msg << "value " << x[i] << " outside the search domain " << (d.lo_open ? "(" : "[") << d.lo << ", " << d.hi
            << "]" << (d.integer ? " (integer)" : "");
        throw ConfigError(msg.str(), "stdp." + d.name);
      }
    }
  }
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

class Reader {
 public:
  Reader(const YAML::Node& node, std::string path, std::map<std::string, int>& lines)
      : node_(node), path_(std::move(path)), lines_(lines) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError("expected a mapping", path_, line_of(node_));
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return;
    const YAML::Node v = node_[key];
    if (!v) return;
    lines_[full(key)] = line_of(v);
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("has the wrong type", full(key), line_of(v));
    }
  }

  template <typename T>
  void get_with(const char* key, T& out, const std::function<T(const std::string&)>& parse) {
    std::string s;
    bool present = has(key);
    get(key, s);
    if (!present) return;
    try {
      out = parse(s);
    } catch (const Error& e) {
      throw ConfigError(e.what(), full(key), lines_[full(key)]);
    }
  }

  bool has(const char* key) const { return node_ && node_.IsMap() && node_[key]; }
  YAML::Node child(const char* key) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return YAML::Node();
    const YAML::Node c = node_[key];
    if (c) lines_[full(key)] = line_of(c);
    return c;
  }
  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (!seen_.count(k)) throw ConfigError("unknown key", full(k), line_of(kv.first));
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::map<std::string, int>& lines_;
  std::set<std::string> seen_;
};

void read_stdp(Reader& r, StdpConfig& s) {
  r.get("eta", s.eta);
  r.get("sigma", s.sigma);
  r.get("c_plus", s.c_plus);
  r.get("c_minus", s.c_minus);
  r.get("tau_plus", s.tau_plus);
  r.get("tau_minus", s.tau_minus);
  r.get("s_sat", s.s_sat);
  r.get("gamma_decay", s.gamma_decay);
  r.get("w0", s.w0);
  r.get("w_min", s.w_min);
  r.get("w_max", s.w_max);
  r.get("pre_increment", s.pre_increment);
  r.get("post_increment", s.post_increment);
}

void read_neuron(Reader& r, NeuronParams& p) {
  r.get("tau_mem", p.tau_mem);
  r.get("e_rest", p.e_rest);
  r.get("e_exc", p.e_exc);
  r.get("e_inh", p.e_inh);
  r.get("v_thresh_base", p.v_thresh_base);
  r.get("v_reset", p.v_reset);
  r.get("t_refrac", p.t_refrac);
  r.get("tau_ge", p.tau_ge);
  r.get("tau_gi", p.tau_gi);
  r.get("theta_plus", p.theta_plus);
  r.get("tau_theta", p.tau_theta);
}

StdpRule parse_rule_str(const std::string& s) { return parse_rule(s); }

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, {}, e.mark.is_null() ? 0 : e.mark.line + 1);
  }
  ExperimentConfig c;
  std::map<std::string, int> lines;
  Reader top(root, "", lines);
  top.get("dataset", c.dataset);
  top.get("data_dir", c.data_dir);
  top.get("jobs", c.jobs);

  {
    Reader r(top.child("network"), "network", lines);
    auto& n = c.network;
    r.get("n_input", n.n_input);
    const bool inh_given = r.has("n_inh");
    r.get("n_exc", n.n_exc);
    if (!inh_given) n.n_inh = n.n_exc;
    r.get("n_inh", n.n_inh);
    r.get("w_init_low", n.w_init_low);
    r.get("w_init_high", n.w_init_high);
    r.get("w_exc_inh", n.w_exc_inh);
    r.get("w_inh_exc", n.w_inh_exc);
    r.get("input_weight_sum", n.input_weight_sum);
    r.get("dt", n.dt);
    r.get("synaptic_delay", n.synaptic_delay);
    r.get("trace_floor", n.trace_floor);
    r.get("seed", n.seed);
    r.finish();
  }
  {
    Reader r(top.child("stdp"), "stdp", lines);
    if (r.has("rule")) {
      StdpRule rule = StdpRule::kLog;
      r.get_with<StdpRule>("rule", rule, parse_rule_str);
      c.network.stdp = network_stdp_defaults(rule);
    } else {
      std::string ignored;
      r.get("rule", ignored);
    }
    read_stdp(r, c.network.stdp);
    r.finish();
  }
  {
    Reader r(top.child("neuron_exc"), "neuron_exc", lines);
    read_neuron(r, c.network.exc);
    r.finish();
  }
  {
    Reader r(top.child("neuron_inh"), "neuron_inh", lines);
    read_neuron(r, c.network.inh);
    r.finish();
  }
  {
    Reader r(top.child("encoding"), "encoding", lines);
    r.get("duration_ms", c.encoding.duration_ms);
    r.get("rest_ms", c.encoding.rest_ms);
    r.get("min_spikes", c.encoding.min_spikes);
    r.get("max_boost", c.encoding.max_boost);
    r.get("normalize_sum", c.encoding.normalize_sum);
    r.finish();
  }
  {
    Reader r(top.child("training"), "training", lines);
    auto& t = c.training;
    r.get("iterations", t.iterations);
    r.get("samples_per_iteration", t.samples_per_iteration);
    r.get("train_eval_samples", t.train_eval_samples);
    r.get("test_eval_samples", t.test_eval_samples);
    r.get("test_repeats", t.test_repeats);
    r.get("evaluate_every", t.evaluate_every);
    r.get("reservoir_capacity", t.reservoir_capacity);
    r.get("tail_k1", t.tail_k1);
    r.finish();
  }
  {
    Reader r(top.child("sweep"), "sweep", lines);
    r.get_with<SweepAxis>("axis", c.sweep.axis, parse_sweep_axis);
    r.get("values", c.sweep.values);
    if (r.has("rules")) {
      std::vector<std::string> names;
      r.get("rules", names);
      c.sweep.rules.clear();
      for (const auto& n : names) {
        try {
          c.sweep.rules.push_back(parse_rule(n));
        } catch (const Error& e) {
          throw ConfigError(e.what(), "sweep.rules", lines["sweep.rules"]);
        }
      }
    } else {
      std::vector<std::string> ignored;
      r.get("rules", ignored);
    }
    r.get("seeds", c.sweep.seeds);
    r.finish();
  }
  {
    Reader r(top.child("calibration"), "calibration", lines);
    auto& k = c.calibration;
    r.get("pools", k.pools);
    r.get("per_pool", k.per_pool);
    r.get("rate_hz", k.rate_hz);
    r.get("correlation", k.correlation);
    r.get("duration_ms", k.duration_ms);
    r.get("input_gain", k.input_gain);
    r.get("w_init", k.w_init);
    r.get("eta", k.eta);
    r.get("kde_points", k.kde_points);
    r.finish();
  }
  {
    Reader r(top.child("bo"), "bo", lines);
    r.get("enabled", c.bo.enabled);
    r.get("budget", c.bo.budget);
    r.get("initial_points", c.bo.initial_points);
    r.get("k_folds", c.bo.k_folds);
    r.get("candidates", c.bo.candidates);
    const YAML::Node doms = r.child("domains");
    if (doms && !doms.IsNull()) {
      if (!doms.IsMap()) throw ConfigError("expected a mapping", "bo.domains", line_of(doms));
      auto list = c.bo.space.domains();
      for (const auto& kv : doms) {
        const auto name = kv.first.as<std::string>();
        auto it = std::find_if(list.begin(), list.end(), [&](const ParamDomain& d) { return d.name == name; });
        if (it == list.end()) {
          list.push_back({name});
          it = list.end() - 1;
        }
        Reader d(kv.second, "bo.domains." + name, lines);
        d.get("lo", it->lo);
        d.get("hi", it->hi);
        d.get("integer", it->integer);
        d.get("lo_open", it->lo_open);
        d.finish();
      }
      try {
        c.bo.space = SearchSpace(std::move(list));
        StdpConfig probe;
        apply_params(c.bo.space, ParamVector(c.bo.space.dims(), 1.0), probe);
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what(), "bo.domains", line_of(doms));
      }
    }
    r.finish();
  }
  top.finish();

  try {
    c.validate();
  } catch (const ConfigError& e) {
    if (e.line() != 0) throw;
    const auto it = lines.find(e.key());
    if (it == lines.end()) throw;
    const std::string what = e.what();
    const auto pos = what.find(": ");
    throw ConfigError(pos == std::string::npos ? what : what.substr(pos + 2), e.key(), it->second);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

void emit_stdp(YAML::Emitter& e, const StdpConfig& s) {
  e << YAML::Key << "rule" << YAML::Value << std::string(to_string(s.rule));
  e << YAML::Key << "eta" << YAML::Value << s.eta;
  e << YAML::Key << "sigma" << YAML::Value << s.sigma;
  e << YAML::Key << "c_plus" << YAML::Value << s.c_plus;
  e << YAML::Key << "c_minus" << YAML::Value << s.c_minus;
  e << YAML::Key << "tau_plus" << YAML::Value << s.tau_plus;
  e << YAML::Key << "tau_minus" << YAML::Value << s.tau_minus;
  e << YAML::Key << "s_sat" << YAML::Value << s.s_sat;
  e << YAML::Key << "gamma_decay" << YAML::Value << s.gamma_decay;
  e << YAML::Key << "w0" << YAML::Value << s.w0;
  e << YAML::Key << "w_min" << YAML::Value << s.w_min;
  e << YAML::Key << "w_max" << YAML::Value << s.w_max;
  e << YAML::Key << "pre_increment" << YAML::Value << s.pre_increment;
  e << YAML::Key << "post_increment" << YAML::Value << s.post_increment;
}

void emit_neuron(YAML::Emitter& e, const NeuronParams& p) {
  e << YAML::Key << "tau_mem" << YAML::Value << p.tau_mem;
  e << YAML::Key << "e_rest" << YAML::Value << p.e_rest;
  e << YAML::Key << "e_exc" << YAML::Value << p.e_exc;
  e << YAML::Key << "e_inh" << YAML::Value << p.e_inh;
  e << YAML::Key << "v_thresh_base" << YAML::Value << p.v_thresh_base;
  e << YAML::Key << "v_reset" << YAML::Value << p.v_reset;
  e << YAML::Key << "t_refrac" << YAML::Value << p.t_refrac;
  e << YAML::Key << "tau_ge" << YAML::Value << p.tau_ge;
  e << YAML::Key << "tau_gi" << YAML::Value << p.tau_gi;
  e << YAML::Key << "theta_plus" << YAML::Value << p.theta_plus;
  e << YAML::Key << "tau_theta" << YAML::Value << p.tau_theta;
}

std::string emit(const ExperimentConfig& c, bool flow) {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  if (flow) e << YAML::Flow;
  e << YAML::BeginMap;
  e << YAML::Key << "dataset" << YAML::Value << c.dataset;
  e << YAML::Key << "data_dir" << YAML::Value << YAML::DoubleQuoted << c.data_dir;
  e << YAML::Key << "jobs" << YAML::Value << c.jobs;

  const auto& n = c.network;
  e << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "n_input" << YAML::Value << n.n_input;
  e << YAML::Key << "n_exc" << YAML::Value << n.n_exc;
  e << YAML::Key << "n_inh" << YAML::Value << n.n_inh;
  e << YAML::Key << "w_init_low" << YAML::Value << n.w_init_low;
  e << YAML::Key << "w_init_high" << YAML::Value << n.w_init_high;
  e << YAML::Key << "w_exc_inh" << YAML::Value << n.w_exc_inh;
  e << YAML::Key << "w_inh_exc" << YAML::Value << n.w_inh_exc;
  e << YAML::Key << "input_weight_sum" << YAML::Value << n.input_weight_sum;
  e << YAML::Key << "dt" << YAML::Value << n.dt;
  e << YAML::Key << "synaptic_delay" << YAML::Value << n.synaptic_delay;
  e << YAML::Key << "trace_floor" << YAML::Value << n.trace_floor;
  e << YAML::Key << "seed" << YAML::Value << n.seed;
  e << YAML::EndMap;

  e << YAML::Key << "stdp" << YAML::Value << YAML::BeginMap;
  emit_stdp(e, n.stdp);
  e << YAML::EndMap;
  e << YAML::Key << "neuron_exc" << YAML::Value << YAML::BeginMap;
  emit_neuron(e, n.exc);
  e << YAML::EndMap;
  e << YAML::Key << "neuron_inh" << YAML::Value << YAML::BeginMap;
  emit_neuron(e, n.inh);
  e << YAML::EndMap;

  e << YAML::Key << "encoding" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "duration_ms" << YAML::Value << c.encoding.duration_ms;
  e << YAML::Key << "rest_ms" << YAML::Value << c.encoding.rest_ms;
  e << YAML::Key << "min_spikes" << YAML::Value << c.encoding.min_spikes;
  e << YAML::Key << "max_boost" << YAML::Value << c.encoding.max_boost;
  e << YAML::Key << "normalize_sum" << YAML::Value << c.encoding.normalize_sum;
  e << YAML::EndMap;

  const auto& t = c.training;
  e << YAML::Key << "training" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "iterations" << YAML::Value << t.iterations;
  e << YAML::Key << "samples_per_iteration" << YAML::Value << t.samples_per_iteration;
  e << YAML::Key << "train_eval_samples" << YAML::Value << t.train_eval_samples;
  e << YAML::Key << "test_eval_samples" << YAML::Value << t.test_eval_samples;
  e << YAML::Key << "test_repeats" << YAML::Value << t.test_repeats;
  e << YAML::Key << "evaluate_every" << YAML::Value << t.evaluate_every;
  e << YAML::Key << "reservoir_capacity" << YAML::Value << t.reservoir_capacity;
  e << YAML::Key << "tail_k1" << YAML::Value << t.tail_k1;
  e << YAML::EndMap;

  e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "axis" << YAML::Value << to_string(c.sweep.axis);
  e << YAML::Key << "values" << YAML::Value << YAML::Flow << c.sweep.values;
  std::vector<std::string> rules;
  for (auto r : c.sweep.rules) rules.emplace_back(to_string(r));
  e << YAML::Key << "rules" << YAML::Value << YAML::Flow << rules;
  e << YAML::Key << "seeds" << YAML::Value << YAML::Flow << c.sweep.seeds;
  e << YAML::EndMap;

  const auto& k = c.calibration;
  e << YAML::Key << "calibration" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "pools" << YAML::Value << k.pools;
  e << YAML::Key << "per_pool" << YAML::Value << k.per_pool;
  e << YAML::Key << "rate_hz" << YAML::Value << k.rate_hz;
  e << YAML::Key << "correlation" << YAML::Value << k.correlation;
  e << YAML::Key << "duration_ms" << YAML::Value << k.duration_ms;
  e << YAML::Key << "input_gain" << YAML::Value << k.input_gain;
  e << YAML::Key << "w_init" << YAML::Value << k.w_init;
  e << YAML::Key << "eta" << YAML::Value << k.eta;
  e << YAML::Key << "kde_points" << YAML::Value << k.kde_points;
  e << YAML::EndMap;

  e << YAML::Key << "bo" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "enabled" << YAML::Value << c.bo.enabled;
  e << YAML::Key << "budget" << YAML::Value << c.bo.budget;
  e << YAML::Key << "initial_points" << YAML::Value << c.bo.initial_points;
  e << YAML::Key << "k_folds" << YAML::Value << c.bo.k_folds;
  e << YAML::Key << "candidates" << YAML::Value << c.bo.candidates;
  e << YAML::Key << "domains" << YAML::Value << YAML::BeginMap;
  for (const auto& d : c.bo.space.domains()) {
    e << YAML::Key << d.name << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "lo" << YAML::Value << d.lo;
    e << YAML::Key << "hi" << YAML::Value << d.hi;
    e << YAML::Key << "integer" << YAML::Value << d.integer;
    e << YAML::Key << "lo_open" << YAML::Value << d.lo_open;
    e << YAML::EndMap;
  }
  e << YAML::EndMap;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return std::string(e.c_str()) + (flow ? "" : "\n");
}

}  // namespace

std::string serialize_config(const ExperimentConfig& cfg) { return emit(cfg, false); }
std::string serialize_config_inline(const ExperimentConfig& cfg) { return emit(cfg, true); }

}  // namespace stdpgen
