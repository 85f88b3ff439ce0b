#pragma once

#include <stdexcept>
#include <string>

namespace adec {

/// Input outside the mathematical domain of an operation (negative frequency,
/// omega_c >= omega0, ...). Maps to CLI exit code 1.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed configuration or CLI usage. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, int line, const std::string& message)
      : std::runtime_error(format(key, line, message)), key_(key), line_(line) {}
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message), line_(0) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& key, int line, const std::string& message) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!key.empty()) out += "'" + key + "': ";
    return out + message;
  }

  std::string key_;
  int line_;
};

/// A numerical procedure failed to reach its tolerance. Carries the best error
/// estimate that was achieved. Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& message, double achieved_error)
      : std::runtime_error(message + " (achieved error estimate " + std::to_string(achieved_error) + ")"),
        achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Two frequencies of the first-order solve collide (secular/resonant case).
class DegeneracyError : public NumericError {
 public:
  DegeneracyError(const std::string& message, double separation)
      : NumericError(message, separation) {}
};

/// Sample grid too coarse for the requested accuracy.
class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace adec
