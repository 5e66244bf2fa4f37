#include "stdpgen/trial_log.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "stdpgen/errors.hpp"

namespace stdpgen {

using nlohmann::json;

namespace {
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number_or_nan(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }
}  // namespace

std::string trial_to_json(const Trial& t) {
  json j;
  j["index"] = t.index;
  j["names"] = t.names;
  j["params"] = t.params;
  j["objective"] = number_or_null(t.objective);
  j["fold_objectives"] = t.fold_objectives;
  j["training_accuracy"] = number_or_null(t.training_accuracy);
  j["testing_accuracy"] = number_or_null(t.testing_accuracy);
  j["generalization_error"] = number_or_null(t.generalization_error);
  j["status"] = to_string(t.status);
  j["error"] = t.error;
  j["initial_design"] = t.initial_design;
  j["started_at"] = t.started_at;
  j["finished_at"] = t.finished_at;
  return j.dump();
}

Trial trial_from_json(const std::string& line) {
  const json j = json::parse(line);
  Trial t;
  t.index = j.at("index").get<std::size_t>();
  t.names = j.at("names").get<std::vector<std::string>>();
  t.params = j.at("params").get<std::vector<double>>();
  if (t.names.size() != t.params.size()) throw Error(ErrorCode::kDataFormat, "trial names and params differ in length");
  t.objective = number_or_nan(j.at("objective"));
  t.fold_objectives = j.at("fold_objectives").get<std::vector<double>>();
  t.training_accuracy = number_or_nan(j.at("training_accuracy"));
  t.testing_accuracy = number_or_nan(j.at("testing_accuracy"));
  t.generalization_error = number_or_nan(j.at("generalization_error"));
  t.status = parse_trial_status(j.at("status").get<std::string>());
  t.error = j.at("error").get<std::string>();
  t.initial_design = j.at("initial_design").get<bool>();
  t.started_at = j.at("started_at").get<std::string>();
  t.finished_at = j.at("finished_at").get<std::string>();
  return t;
}

void append_trial(std::ostream& out, const Trial& t) { out << trial_to_json(t) << '\n' << std::flush; }

void write_trial_log(std::ostream& out, const std::vector<Trial>& trials) {
  for (const auto& t : trials) out << trial_to_json(t) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "failed writing trial log");
}

void write_trial_log(const std::filesystem::path& path, const std::vector<Trial>& trials) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_trial_log(out, trials);
}

std::vector<Trial> read_trial_log(std::istream& in) {
  std::vector<Trial> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(trial_from_json(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kDataFormat, "trial log line " + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kDataFormat, "trial log line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Trial> read_trial_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return read_trial_log(in);
}

}  // namespace stdpgen
