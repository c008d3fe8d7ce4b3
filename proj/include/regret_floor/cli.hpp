#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "regret_floor/experiment.hpp"

namespace regret_floor::cli {

/// Resolved settings for one invocation. Defaults follow the reference
/// protocol: sigma2 = a = 1, b = c = 0, init at x* +- 1, p = 2, 100 runs.
struct Settings {
  ExperimentConfig config;
  std::uint64_t n_runs = 100;
  std::vector<std::string> p_list{"greedy", "0.8", "1.4", "2", "2.8", "3.6"};
  int threads = 0;  // 0 = runtime default
};

/// Applies a JSON config object. Throws ConfigError naming the key on
/// unknown keys or wrongly typed values.
void apply_json(const nlohmann::json& j, Settings& settings);

/// Worker cap from REGRET_FLOOR_THREADS (unset or "0" gives 0).
int threads_from_env();

/// Entry point. Exit codes: 0 success, 2 usage/config/input error, 1 internal.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regret_floor::cli
