#pragma once

#include <stdexcept>
#include <string>

namespace regret_floor {

/// Raised when a quadratic is given a non-positive curvature (no maximum).
class InvalidCurvature : public std::invalid_argument {
 public:
  explicit InvalidCurvature(double a);
};

/// A configuration value failed validation. `field()` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class FitErrc {
  no_leverage,        // S_xx at or below the leverage floor
  insufficient_data,  // too few points for the requested sigma mode
};

class FitError : public std::runtime_error {
 public:
  FitErrc code() const noexcept { return code_; }
  FitError(FitErrc code, const std::string& message);

 private:
  FitErrc code_;
};

enum class ExponentFitErrc { empty_window, non_positive_value };

class ExponentFitError : public std::runtime_error {
 public:
  ExponentFitError(ExponentFitErrc code, const std::string& message);
  ExponentFitErrc code() const noexcept { return code_; }

 private:
  ExponentFitErrc code_;
};

}  // namespace regret_floor
