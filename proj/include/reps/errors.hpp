#pragma once

#include <stdexcept>
#include <string>

namespace reps {

// Base class for all library errors. Subcommands map these to exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Violated internal invariant (exit code 3 at the CLI boundary).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class ZeroVarianceFeature : public ConfigError {
 public:
  explicit ZeroVarianceFeature(const std::string& feature)
      : ConfigError("continuous feature '" + feature +
                    "' is constant on the train split") {}
};

class DatasetTooSmall : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
 public:
  ParseError(std::size_t row, std::size_t col, const std::string& detail)
      : ConfigError("parse error at row " + std::to_string(row) + ", column " +
                    std::to_string(col) + ": " + detail) {}
};

class SchemaMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownFeature : public ConfigError {
 public:
  explicit UnknownFeature(const std::string& name)
      : ConfigError("unknown feature '" + name + "'") {}
};

class InvalidBudget : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class LengthMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyTrainSplit : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class IndexOutOfRange : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidTarget : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class TooFewRecords : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptySynthetic : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class SingleClass : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyDecile : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class MissingStage : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownKind : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace reps
