#include "regret_floor/errors.hpp"

#include <utility>

namespace regret_floor {

InvalidCurvature::InvalidCurvature(double a)
    : std::invalid_argument("curvature a must be positive, got " + std::to_string(a)) {}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

FitError::FitError(FitErrc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

ExponentFitError::ExponentFitError(ExponentFitErrc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace regret_floor
