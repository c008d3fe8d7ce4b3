#include "regret_floor/rng.hpp"

#include <cmath>
#include <numbers>

#include "regret_floor/errors.hpp"

namespace regret_floor {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index,
                          Stream stream) noexcept {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ run_index);
  return mix64(h ^ static_cast<std::uint64_t>(stream));
}

double Rng::standard_normal() {
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view to_string(NoiseDistribution d) noexcept {
  switch (d) {
    case NoiseDistribution::gaussian:
      return "gaussian";
    case NoiseDistribution::uniform:
      return "uniform";
    case NoiseDistribution::rademacher:
      return "rademacher";
  }
  return "gaussian";
}

NoiseDistribution parse_noise_distribution(std::string_view name, const char* field) {
  if (name == "gaussian") return NoiseDistribution::gaussian;
  if (name == "uniform") return NoiseDistribution::uniform;
  if (name == "rademacher") return NoiseDistribution::rademacher;
  throw ConfigError(field, "unknown noise distribution '" + std::string(name) +
                               "' (expected gaussian, uniform or rademacher)");
}

double draw_zero_mean(NoiseDistribution d, double variance, Rng& rng) {
  const double sd = std::sqrt(variance);
  switch (d) {
    case NoiseDistribution::gaussian:
      return sd * rng.standard_normal();
    case NoiseDistribution::uniform:
      // U(-h, h) has variance h^2 / 3.
      return sd * std::numbers::sqrt3 * (2.0 * rng.uniform_open() - 1.0);
    case NoiseDistribution::rademacher:
      return (rng.next_u64() >> 63) ? sd : -sd;
  }
  return 0.0;
}

}  // namespace regret_floor
