#include "regret_floor/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "regret_floor/errors.hpp"
#include "regret_floor/io.hpp"

namespace regret_floor::cli {

namespace fs = std::filesystem;

namespace {

SigmaMode parse_sigma_mode(const std::string& s) {
  if (s == "known") return SigmaMode::known;
  if (s == "residual") return SigmaMode::residual;
  throw ConfigError("sigma_mode", "expected 'known' or 'residual', got '" + s + "'");
}

PolicyKind parse_policy_kind(const std::string& s) {
  if (s == "stochastic") return PolicyKind::stochastic;
  if (s == "greedy") return PolicyKind::greedy;
  throw ConfigError("policy", "expected 'stochastic' or 'greedy', got '" + s + "'");
}

template <class T>
T get_as(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(key, "has the wrong type");
  }
}

// Command-line overrides; unset fields keep the file or default value.
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<double> a, b, c, sigma2, p, fallback_variance, geometric_ratio;
  std::optional<std::string> noise, policy, injection_noise, sigma_mode;
  std::vector<double> init_queries;
  std::optional<std::uint64_t> horizon, dense_until, master_seed, n_runs;
  std::vector<std::string> p_list;
  std::optional<int> threads;
  std::string out_dir = ".";
};

void add_experiment_options(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config_path, "JSON config file; flags override its values");
  app->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  app->add_option("--a", o.a, "Curvature a > 0");
  app->add_option("--b", o.b, "Linear coefficient b");
  app->add_option("--c", o.c, "Constant term c");
  app->add_option("--sigma2", o.sigma2, "Measurement noise variance");
  app->add_option("--noise", o.noise, "Measurement noise: gaussian|uniform|rademacher");
  app->add_option("--policy", o.policy, "stochastic|greedy");
  app->add_option("--p", o.p, "Exploration exponent for the stochastic policy");
  app->add_option("--fallback-variance", o.fallback_variance,
                  "Injected variance while no estimate exists");
  app->add_option("--injection-noise", o.injection_noise,
                  "Injected query noise: gaussian|uniform|rademacher");
  app->add_option("--sigma-mode", o.sigma_mode, "known|residual");
  app->add_option("--init", o.init_queries, "Initial queries (default x* -1, x* +1)")
      ->delimiter(',');
  app->add_option("--horizon", o.horizon, "Number of measured queries T");
  app->add_option("--dense-until", o.dense_until, "Record every step up to this t");
  app->add_option("--geometric-ratio", o.geometric_ratio, "Checkpoint spacing ratio beyond that");
  app->add_option("--seed", o.master_seed, "Master seed");
  app->add_option("--threads", o.threads, "Worker cap (0 = auto); overrides REGRET_FLOOR_THREADS");
}

Settings resolve(const Overrides& o) {
  Settings s;
  bool init_given = false;
  if (o.config_path) {
    std::ifstream in(*o.config_path);
    if (!in) throw ConfigError("config", "cannot open " + *o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    apply_json(j, s);
    init_given = j.contains("init_queries");
  }
  ExperimentConfig& cfg = s.config;
  if (o.a) cfg.objective.a = *o.a;
  if (o.b) cfg.objective.b = *o.b;
  if (o.c) cfg.objective.c = *o.c;
  if (o.sigma2) cfg.noise.sigma2 = *o.sigma2;
  if (o.noise) cfg.noise.distribution = parse_noise_distribution(*o.noise, "noise");
  if (o.policy) cfg.policy.kind = parse_policy_kind(*o.policy);
  if (o.p) cfg.policy.p = *o.p;
  if (o.fallback_variance) cfg.policy.fallback_variance = *o.fallback_variance;
  if (o.injection_noise)
    cfg.policy.injection = parse_noise_distribution(*o.injection_noise, "injection_noise");
  if (o.sigma_mode) cfg.sigma_mode = parse_sigma_mode(*o.sigma_mode);
  if (!o.init_queries.empty()) {
    cfg.init_queries = o.init_queries;
    init_given = true;
  }
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.dense_until) cfg.schedule.dense_until = *o.dense_until;
  if (o.geometric_ratio) cfg.schedule.geometric_ratio = *o.geometric_ratio;
  if (o.master_seed) cfg.master_seed = *o.master_seed;
  if (o.n_runs) s.n_runs = *o.n_runs;
  if (!o.p_list.empty()) s.p_list = o.p_list;
  s.threads = o.threads ? *o.threads : threads_from_env();
  if (s.threads < 0) throw ConfigError("threads", "must be >= 0");

  cfg.objective.validate();
  if (!init_given) {
    const double xs = optimum(cfg.objective).location;
    cfg.init_queries = {xs - 1.0, xs + 1.0};
  }
  cfg.validate();
  if (s.n_runs < 1) throw ConfigError("n_runs", "must be >= 1");
  return s;
}

std::string fit_summary_line(const char* name, const ExponentFit& f) {
  std::ostringstream os;
  os << name << ": r_hat=" << f.r_hat << " k_hat=" << f.k_hat << " window=[" << f.window.t_min
     << ", " << f.window.t_max << "] points=" << f.n_points;
  return os.str();
}

}  // namespace

void apply_json(const nlohmann::json& j, Settings& s) {
  if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
  ExperimentConfig& cfg = s.config;
  for (const auto& [key, v] : j.items()) {
    if (key == "a") cfg.objective.a = get_as<double>(v, key);
    else if (key == "b") cfg.objective.b = get_as<double>(v, key);
    else if (key == "c") cfg.objective.c = get_as<double>(v, key);
    else if (key == "sigma2") cfg.noise.sigma2 = get_as<double>(v, key);
    else if (key == "noise") cfg.noise.distribution = parse_noise_distribution(get_as<std::string>(v, key), "noise");
    else if (key == "policy") cfg.policy.kind = parse_policy_kind(get_as<std::string>(v, key));
    else if (key == "p") cfg.policy.p = get_as<double>(v, key);
    else if (key == "fallback_variance") cfg.policy.fallback_variance = get_as<double>(v, key);
    else if (key == "injection_noise") cfg.policy.injection = parse_noise_distribution(get_as<std::string>(v, key), "injection_noise");
    else if (key == "sigma_mode") cfg.sigma_mode = parse_sigma_mode(get_as<std::string>(v, key));
    else if (key == "init_queries") cfg.init_queries = get_as<std::vector<double>>(v, key);
    else if (key == "horizon") cfg.horizon = get_as<std::uint64_t>(v, key);
    else if (key == "dense_until") cfg.schedule.dense_until = get_as<std::uint64_t>(v, key);
    else if (key == "geometric_ratio") cfg.schedule.geometric_ratio = get_as<double>(v, key);
    else if (key == "master_seed") cfg.master_seed = get_as<std::uint64_t>(v, key);
    else if (key == "n_runs") s.n_runs = get_as<std::uint64_t>(v, key);
    else if (key == "p_list") {
      s.p_list.clear();
      for (const auto& item : v) {
        if (item.is_string()) s.p_list.push_back(item.get<std::string>());
        else if (item.is_number()) s.p_list.push_back(item.dump());
        else throw ConfigError("p_list", "entries must be numbers or \"greedy\"");
      }
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  }
}

int threads_from_env() {
  const char* v = std::getenv("REGRET_FLOOR_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) throw ConfigError("REGRET_FLOOR_THREADS", "must be a non-negative integer");
  return static_cast<int>(n);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate noisy gradient-free optimization of a quadratic and compare regret "
               "against its lower bound"};
  app.require_subcommand(1);

  Overrides sim_o, mc_o, sweep_o, bounds_o;
  std::uint64_t run_index = 0;
  bool write_traces = false;
  std::optional<double> mc_t_min, mc_t_max;

  auto* sim = app.add_subcommand("simulate", "Single run; writes trace.csv");
  add_experiment_options(sim, sim_o);
  sim->add_option("--run-index", run_index, "Run index used to derive the stream");

  auto* mc = app.add_subcommand("montecarlo", "Ensemble; writes aggregate.csv and summary.json");
  add_experiment_options(mc, mc_o);
  mc->add_option("--runs", mc_o.n_runs, "Number of runs");
  mc->add_flag("--write-traces", write_traces, "Also write traces/run_NNNN.csv per run");
  mc->add_option("--t-min", mc_t_min, "Exponent-fit window start (default horizon/100)");
  mc->add_option("--t-max", mc_t_max, "Exponent-fit window end (default horizon)");

  auto* sw = app.add_subcommand("sweep", "Final total regret per exploration exponent; writes sweep.csv");
  add_experiment_options(sw, sweep_o);
  sw->add_option("--runs", sweep_o.n_runs, "Runs per entry");
  sw->add_option("--p-list", sweep_o.p_list, "Exponents, 'greedy' allowed")->delimiter(',');

  auto* bd = app.add_subcommand("bounds", "Closed-form bound curves; writes bounds.csv");
  add_experiment_options(bd, bounds_o);

  std::string fit_aggregate;
  std::string fit_out = ".";
  std::optional<double> fit_t_min, fit_t_max;
  auto* ft = app.add_subcommand("fit", "Power-law exponents of an aggregate.csv; writes fit.json");
  ft->add_option("--aggregate", fit_aggregate, "aggregate.csv to read")->required();
  ft->add_option("--out", fit_out, "Output directory")->capture_default_str();
  ft->add_option("--t-min", fit_t_min, "Window start (default last t / 100)");
  ft->add_option("--t-max", fit_t_max, "Window end (default last t)");

  std::vector<std::string> plot_traces;
  std::string plot_sweep;
  std::string plot_out = ".";
  double plot_sigma2 = 1.0;
  auto* pl = app.add_subcommand("plot", "Render runs.svg and/or sweep.svg from CSV output");
  pl->add_option("--trace", plot_traces, "trace.csv files to overlay in runs.svg");
  pl->add_option("--sweep-csv", plot_sweep, "sweep.csv to render as sweep.svg");
  pl->add_option("--sigma2", plot_sigma2, "Noise variance for the overlay curves")->capture_default_str();
  pl->add_option("--out", plot_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed()) {
      const Settings s = resolve(sim_o);
      const RunTrace trace = run_single(s.config, run_index);
      io::write_text(fs::path(sim_o.out_dir) / "trace.csv", io::trace_csv(trace));
      out << "final total regret " << trace.final_total_regret << "\n";
    } else if (mc->parsed()) {
      const Settings s = resolve(mc_o);
      const std::vector<RunTrace> traces = run_traces(s.config, s.n_runs, s.threads);
      const Aggregate agg = aggregate_traces(s.config, traces);
      FitWindow w = default_window(s.config.horizon);
      if (mc_t_min) w.t_min = *mc_t_min;
      if (mc_t_max) w.t_max = *mc_t_max;
      const ExponentFit sq = fit_exponent(agg, Series::sq_err, w);
      const ExponentFit rg = fit_exponent(agg, Series::regret, w);
      const fs::path dir(mc_o.out_dir);
      io::write_text(dir / "aggregate.csv", io::aggregate_csv(agg));
      io::write_text(dir / "summary.json", io::summary_json(s.config, agg, sq, rg).dump(2) + "\n");
      if (write_traces) {
        for (const RunTrace& tr : traces) {
          char name[32];
          std::snprintf(name, sizeof name, "run_%04llu.csv",
                        static_cast<unsigned long long>(tr.run_index));
          io::write_text(dir / "traces" / name, io::trace_csv(tr));
        }
      }
      const AggregateRow& last = agg.checkpoints.back();
      out << "mean R_T " << last.mean_regret << " (std " << last.std_regret << ")\n"
          << fit_summary_line("sq_err", sq) << "\n"
          << fit_summary_line("regret", rg) << "\n";
    } else if (sw->parsed()) {
      const Settings s = resolve(sweep_o);
      std::vector<PolicyConfig> policies;
      for (const std::string& token : s.p_list) policies.push_back(parse_policy_label(token));
      if (policies.empty()) throw ConfigError("p_list", "must not be empty");
      std::vector<SweepRow> rows = sweep_p(s.config, policies, s.n_runs, s.threads);
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i].label = s.p_list[i];
      io::write_text(fs::path(sweep_o.out_dir) / "sweep.csv", io::sweep_csv(rows));
      for (const SweepRow& r : rows)
        out << r.label << ": mean " << r.mean_total_regret << " std " << r.std_total_regret << "\n";
    } else if (bd->parsed()) {
      const Settings s = resolve(bounds_o);
      const auto points = s.config.schedule.points(s.config.horizon);
      io::write_text(fs::path(bounds_o.out_dir) / "bounds.csv",
                     io::bounds_csv(s.config.objective.a, std::sqrt(s.config.noise.sigma2), points));
    } else if (ft->parsed()) {
      const Aggregate agg = io::read_aggregate_csv(fit_aggregate);
      FitWindow w = default_window(agg.checkpoints.back().t);
      if (fit_t_min) w.t_min = *fit_t_min;
      if (fit_t_max) w.t_max = *fit_t_max;
      const ExponentFit sq = fit_exponent(agg, Series::sq_err, w);
      const ExponentFit rg = fit_exponent(agg, Series::regret, w);
      const nlohmann::json j = {{"sq_err", io::to_json(sq)}, {"regret", io::to_json(rg)}};
      io::write_text(fs::path(fit_out) / "fit.json", j.dump(2) + "\n");
      out << fit_summary_line("sq_err", sq) << "\n" << fit_summary_line("regret", rg) << "\n";
    } else if (pl->parsed()) {
      if (plot_traces.empty() && plot_sweep.empty())
        throw ConfigError("plot", "give --trace and/or --sweep-csv");
      if (!(plot_sigma2 >= 0.0)) throw ConfigError("sigma2", "must be >= 0");
      if (!plot_traces.empty()) {
        std::vector<RunTrace> traces;
        for (const std::string& p : plot_traces) traces.push_back(io::read_trace_csv(p));
        io::write_text(fs::path(plot_out) / "runs.svg",
                       io::render_runs_svg(traces, std::sqrt(plot_sigma2)));
      }
      if (!plot_sweep.empty()) {
        const std::vector<SweepRow> rows = io::read_sweep_csv(plot_sweep);
        io::write_text(fs::path(plot_out) / "sweep.svg", io::render_sweep_svg(rows));
      }
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidCurvature& e) {
    err << "config error: a: " << e.what() << "\n";
    return 2;
  } catch (const io::CsvError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ExponentFitError& e) {
    err << "fit error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("regret_floor");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace regret_floor::cli
