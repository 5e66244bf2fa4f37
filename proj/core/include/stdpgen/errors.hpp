#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stdpgen {

// Numeric values double as process exit codes for the CLI.
enum class ErrorCode : int {
  kInvalidArgument = 3,
  kInvalidConfig = 4,
  kIntegrationDiverged = 5,
  kEncodingFailure = 6,
  kDataFormat = 7,
  kIo = 8,
  kEstimation = 9,
  kOptimization = 10,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::kInvalidArgument, what) {}
};

class IntegrationDiverged : public Error {
 public:
  explicit IntegrationDiverged(std::size_t neuron);
  std::size_t neuron() const noexcept { return neuron_; }

 private:
  std::size_t neuron_;
};

class EncodingFailure : public Error {
 public:
  explicit EncodingFailure(const std::string& what) : Error(ErrorCode::kEncodingFailure, what) {}
};

/// Configuration problem. `key` names the offending setting when known,
/// `line` is 1-based (0 when not tied to a source line).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string key = {}, int line = 0);
  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

class IdxError : public Error {
 public:
  enum class Kind { kBadMagic, kTruncated, kBadDimensions, kBadLabel, kUnreadable };
  IdxError(Kind kind, const std::string& what);
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class EstimationError : public Error {
 public:
  explicit EstimationError(const std::string& what) : Error(ErrorCode::kEstimation, what) {}
};

class OptimizationError : public Error {
 public:
  explicit OptimizationError(const std::string& what) : Error(ErrorCode::kOptimization, what) {}
};

}  // namespace stdpgen
