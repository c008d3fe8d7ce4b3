#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace regret_floor {

/// SplitMix64 finalizer. Used only to derive independent engine seeds.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Identifies an independent stream inside one run.
enum class Stream : std::uint64_t {
  measurement = 1,
  policy = 2,
};

/// Seed for (master_seed, run_index, stream). Streams of different runs share
/// no state, so runs may execute in any order on any worker.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index,
                          Stream stream) noexcept;

/// Pseudorandom source with a fully specified output sequence: mt19937_64
/// (whose sequence the standard fixes) plus hand-written transforms, so that
/// results do not depend on the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Box-Muller, cosine branch only; consumes two engine outputs.
  double standard_normal();

 private:
  std::mt19937_64 engine_;
};

enum class NoiseDistribution { gaussian, uniform, rademacher };

std::string_view to_string(NoiseDistribution d) noexcept;
/// Throws ConfigError(field) on an unknown name.
NoiseDistribution parse_noise_distribution(std::string_view name,
                                           const char* field = "noise");

/// One zero-mean draw with the given variance. Exactly one variate is drawn
/// even when variance == 0, so stream positions do not depend on the value.
double draw_zero_mean(NoiseDistribution d, double variance, Rng& rng);

}  // namespace regret_floor
