#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "regret_floor/experiment.hpp"

namespace regret_floor::io {

inline constexpr const char* kTraceHeader = "t,x,xstar_hat,stderr_xstar,sq_err,inst_regret,total_regret";
inline constexpr const char* kAggregateHeader =
    "t,mean_sq_err,std_sq_err,mean_regret,std_regret,bound_sq_err,bound_regret,asym_sq_err,"
    "asym_regret";
inline constexpr const char* kSweepHeader = "p,mean_total_regret,std_total_regret,n_runs";
inline constexpr const char* kBoundsHeader =
    "t,bound_sq_err,bound_inst_regret,bound_regret,asym_sq_err,asym_regret";

/// Missing, empty or malformed input file.
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);

std::string trace_csv(const RunTrace& trace);
std::string aggregate_csv(const Aggregate& aggregate);
std::string sweep_csv(std::span<const SweepRow> rows);
std::string bounds_csv(double a, double sigma, std::span<const std::uint64_t> t);

/// Header plus raw cells. Throws CsvError if the file is absent, has no
/// data rows, or its header differs from `expected_header`.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::filesystem::path& path, const std::string& expected_header);

double parse_double(const std::string& cell);

/// Only t and total_regret are needed for plotting, but every column is read.
RunTrace read_trace_csv(const std::filesystem::path& path);
Aggregate read_aggregate_csv(const std::filesystem::path& path);
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

nlohmann::json to_json(const ExponentFit& fit);
nlohmann::json summary_json(const ExperimentConfig& config, const Aggregate& aggregate,
                            const ExponentFit& sq_err_fit, const ExponentFit& regret_fit);

/// R_t of each trace on linear axes with the total-regret floor and the p=2
/// asymptote overlaid.
std::string render_runs_svg(std::span<const RunTrace> traces, double sigma);
/// Log-scale bars of mean total regret with +-1 std risers.
std::string render_sweep_svg(std::span<const SweepRow> rows);

void write_text(const std::filesystem::path& path, const std::string& contents);

}  // namespace regret_floor::io
