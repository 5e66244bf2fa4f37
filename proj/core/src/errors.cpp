#include "stdpgen/errors.hpp"

namespace stdpgen {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kIntegrationDiverged: return "integration-diverged";
    case ErrorCode::kEncodingFailure: return "encoding-failure";
    case ErrorCode::kDataFormat: return "data-format";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kEstimation: return "estimation";
    case ErrorCode::kOptimization: return "optimization";
  }
  return "unknown";
}

IntegrationDiverged::IntegrationDiverged(std::size_t neuron)
    : Error(ErrorCode::kIntegrationDiverged,
            "integration diverged: non-finite state at neuron " + std::to_string(neuron)),
      neuron_(neuron) {}

namespace {
std::string config_message(const std::string& what, const std::string& key, int line) {
  std::string msg = "config error";
  if (line > 0) msg += " (line " + std::to_string(line) + ")";
  if (!key.empty()) msg += " [" + key + "]";
  return msg + ": " + what;
}
}  // namespace

ConfigError::ConfigError(const std::string& what, std::string key, int line)
    : Error(ErrorCode::kInvalidConfig, config_message(what, key, line)),
      key_(std::move(key)),
      line_(line) {}

IdxError::IdxError(Kind kind, const std::string& what)
    : Error(kind == Kind::kUnreadable ? ErrorCode::kIo : ErrorCode::kDataFormat, what), kind_(kind) {}

}  // namespace stdpgen
