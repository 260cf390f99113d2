#pragma once

#include <stdexcept>
#include <string>

namespace dpdp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientStock : public Error {
 public:
  using Error::Error;
};

class InsufficientCargo : public Error {
 public:
  using Error::Error;
};

class WrongLocation : public Error {
 public:
  using Error::Error;
};

class NoCharger : public Error {
 public:
  using Error::Error;
};

class LegacyArity : public Error {
 public:
  using Error::Error;
};

class UnknownAgent : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Scenario validation failure. `path()` is the JSON-style location of the
/// offending field, e.g. `requests[3].depot`.
class ValidationError : public Error {
 public:
  ValidationError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace dpdp
