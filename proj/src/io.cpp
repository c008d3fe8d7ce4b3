#include "regret_floor/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "regret_floor/bounds.hpp"
#include "regret_floor/errors.hpp"

namespace regret_floor::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void append_row(std::string& out, std::uint64_t t, std::initializer_list<double> values) {
  out += std::to_string(t);
  for (double v : values) {
    out += ',';
    out += format_double(v);
  }
  out += '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::uint64_t parse_count(const std::string& cell) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(cell.c_str(), &end, 10);
  if (cell.empty() || end != cell.c_str() + cell.size() || cell.front() == '-')
    throw CsvError("expected a non-negative integer, got '" + cell + "'");
  return v;
}

// Fixed-precision coordinates keep SVG output byte-stable.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

struct Frame {
  double width = 720, height = 480;
  double left = 80, right = 200, top = 40, bottom = 60;
  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

std::string svg_open(const Frame& f, const std::string& title) {
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(f.width) + "\" height=\"" +
       fmt(f.height) + "\" viewBox=\"0 0 " + fmt(f.width) + " " + fmt(f.height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(f.width) + "\" height=\"" + fmt(f.height) +
       "\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(f.left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" +
       escape_xml(title) + "</text>\n";
  s += "<rect x=\"" + fmt(f.left) + "\" y=\"" + fmt(f.top) + "\" width=\"" + fmt(f.plot_w()) +
       "\" height=\"" + fmt(f.plot_h()) + "\" fill=\"none\" stroke=\"black\"/>\n";
  return s;
}

std::string text(double x, double y, const std::string& s, const char* anchor = "start") {
  return "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" font-family=\"sans-serif\" font-size=\"11\"" +
         " text-anchor=\"" + anchor + "\">" + escape_xml(s) + "</text>\n";
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke,
                     const char* extra = "") {
  std::string s = "<polyline fill=\"none\" stroke=\"";
  s += stroke;
  s += "\" ";
  s += extra;
  s += " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += fmt(pts[i].first) + "," + fmt(pts[i].second);
  }
  s += "\"/>\n";
  return s;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::string trace_csv(const RunTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const Checkpoint& c : trace.checkpoints)
    append_row(out, c.t, {c.x, c.xstar_hat, c.stderr_xstar, c.sq_err, c.inst_regret, c.total_regret});
  return out;
}

std::string aggregate_csv(const Aggregate& aggregate) {
  std::string out = kAggregateHeader;
  out += '\n';
  for (const AggregateRow& r : aggregate.checkpoints)
    append_row(out, r.t,
               {r.mean_sq_err, r.std_sq_err, r.mean_regret, r.std_regret, r.bound_sq_err,
                r.bound_regret, r.asym_sq_err, r.asym_regret});
  return out;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const SweepRow& r : rows) {
    out += r.label + ',' + format_double(r.mean_total_regret) + ',' +
           format_double(r.std_total_regret) + ',' + std::to_string(r.n_runs) + '\n';
  }
  return out;
}

std::string bounds_csv(double a, double sigma, std::span<const std::uint64_t> t) {
  std::string out = kBoundsHeader;
  out += '\n';
  for (std::uint64_t ti : t) {
    const auto td = static_cast<double>(ti);
    const OptimalAsymptotics asym = optimal_asymptotics(a, sigma, td);
    append_row(out, ti,
               {sq_err_lower_bound(a, sigma, td), inst_regret_lower_bound(sigma, td),
                total_regret_lower_bound(sigma, td), asym.sq_err, asym.regret});
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path, const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw CsvError(path.string() + ": unexpected header '" + line + "', expected '" +
                   expected_header + "'");
  CsvTable table;
  table.header = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != table.header.size())
      throw CsvError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                     std::to_string(table.header.size()) + " fields, got " +
                     std::to_string(cells.size()));
    table.rows.push_back(std::move(cells));
  }
  if (table.rows.empty()) throw CsvError(path.string() + " has no data rows");
  return table;
}

double parse_double(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size())
    throw CsvError("expected a number, got '" + cell + "'");
  return v;
}

RunTrace read_trace_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path, kTraceHeader);
  RunTrace trace;
  std::uint64_t prev = 0;
  for (const auto& r : table.rows) {
    Checkpoint c{};
    c.t = parse_count(r[0]);
    if (!trace.checkpoints.empty() && c.t <= prev)
      throw CsvError(path.string() + ": t is not strictly increasing");
    prev = c.t;
    c.x = parse_double(r[1]);
    c.xstar_hat = parse_double(r[2]);
    c.stderr_xstar = parse_double(r[3]);
    c.sq_err = parse_double(r[4]);
    c.inst_regret = parse_double(r[5]);
    c.total_regret = parse_double(r[6]);
    c.leverage = std::numeric_limits<double>::quiet_NaN();
    trace.checkpoints.push_back(c);
  }
  trace.final_total_regret = trace.checkpoints.back().total_regret;
  return trace;
}

Aggregate read_aggregate_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path, kAggregateHeader);
  Aggregate agg;
  for (const auto& r : table.rows) {
    agg.checkpoints.push_back({parse_count(r[0]), parse_double(r[1]), parse_double(r[2]),
                               parse_double(r[3]), parse_double(r[4]), parse_double(r[5]),
                               parse_double(r[6]), parse_double(r[7]), parse_double(r[8])});
  }
  return agg;
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path, kSweepHeader);
  std::vector<SweepRow> rows;
  for (const auto& r : table.rows) {
    PolicyConfig policy;
    try {
      policy = parse_policy_label(r[0]);
    } catch (const ConfigError& e) {
      throw CsvError(path.string() + ": " + e.what());
    }
    rows.push_back({r[0], policy, parse_double(r[1]), parse_double(r[2]), parse_count(r[3])});
  }
  return rows;
}

nlohmann::json to_json(const ExponentFit& fit) {
  return {{"r_hat", fit.r_hat},
          {"k_hat", fit.k_hat},
          {"t_min", fit.window.t_min},
          {"t_max", fit.window.t_max},
          {"residual_rms", fit.residual_rms},
          {"n_points", fit.n_points}};
}

nlohmann::json summary_json(const ExperimentConfig& config, const Aggregate& aggregate,
                            const ExponentFit& sq_err_fit, const ExponentFit& regret_fit) {
  const AggregateRow& last = aggregate.checkpoints.back();
  nlohmann::json j;
  j["n_runs"] = aggregate.n_runs;
  j["horizon"] = config.horizon;
  j["policy"] = config.policy.label();
  j["master_seed"] = config.master_seed;
  j["final"] = {{"t", last.t},
                {"mean_sq_err", last.mean_sq_err},
                {"std_sq_err", last.std_sq_err},
                {"mean_regret", last.mean_regret},
                {"std_regret", last.std_regret},
                {"bound_regret", last.bound_regret},
                {"asym_regret", last.asym_regret}};
  j["fits"] = {{"sq_err", to_json(sq_err_fit)}, {"regret", to_json(regret_fit)}};
  return j;
}

std::string render_runs_svg(std::span<const RunTrace> traces, double sigma) {
  Frame f;
  double t_max = 1.0, r_max = 0.0;
  for (const RunTrace& tr : traces)
    for (const Checkpoint& c : tr.checkpoints) {
      t_max = std::max(t_max, static_cast<double>(c.t));
      if (std::isfinite(c.total_regret)) r_max = std::max(r_max, c.total_regret);
    }
  const double asym_end = optimal_asymptotics(1.0, sigma, t_max).regret;
  r_max = std::max({r_max, asym_end, 1e-12});

  auto px = [&](double t) { return f.left + f.plot_w() * t / t_max; };
  auto py = [&](double r) { return f.top + f.plot_h() * (1.0 - std::min(r, r_max) / r_max); };

  std::string s = svg_open(f, "Total regret R_t, " + std::to_string(traces.size()) + " runs");
  for (int i = 0; i <= 4; ++i) {
    const double tv = t_max * i / 4.0, rv = r_max * i / 4.0;
    s += text(px(tv), f.top + f.plot_h() + 18, short_number(tv), "middle");
    s += text(f.left - 6, py(rv) + 4, short_number(rv), "end");
  }
  s += text(f.left + f.plot_w() / 2, f.height - 16, "t", "middle");

  for (const RunTrace& tr : traces) {
    std::vector<std::pair<double, double>> pts;
    for (const Checkpoint& c : tr.checkpoints)
      if (std::isfinite(c.total_regret)) pts.emplace_back(px(static_cast<double>(c.t)), py(c.total_regret));
    s += polyline(pts, "#4477aa", "stroke-opacity=\"0.35\" stroke-width=\"1\"");
  }

  std::vector<std::pair<double, double>> floor_pts, asym_pts;
  constexpr int kSamples = 200;
  for (int i = 0; i <= kSamples; ++i) {
    const double t = std::max(1.0, t_max * i / kSamples);
    floor_pts.emplace_back(px(t), py(total_regret_lower_bound(sigma, t)));
    asym_pts.emplace_back(px(t), py(optimal_asymptotics(1.0, sigma, t).regret));
  }
  s += polyline(floor_pts, "#cc3311", "stroke-width=\"2\"");
  s += polyline(asym_pts, "#228833", "stroke-width=\"2\" stroke-dasharray=\"6 4\"");

  const double lx = f.left + f.plot_w() + 12;
  s += "<line x1=\"" + fmt(lx) + "\" y1=\"60\" x2=\"" + fmt(lx + 20) +
       "\" y2=\"60\" stroke=\"#cc3311\" stroke-width=\"2\"/>\n";
  s += text(lx + 26, 64, "floor sigma*sqrt(t/2)");
  s += "<line x1=\"" + fmt(lx) + "\" y1=\"80\" x2=\"" + fmt(lx + 20) +
       "\" y2=\"80\" stroke=\"#228833\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";
  s += text(lx + 26, 84, "p=2 sigma*sqrt(8t)");
  s += "</svg>\n";
  return s;
}

std::string render_sweep_svg(std::span<const SweepRow> rows) {
  Frame f;
  f.right = 40;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const SweepRow& r : rows) {
    if (r.mean_total_regret > 0) {
      lo = std::min(lo, r.mean_total_regret);
      hi = std::max(hi, r.mean_total_regret + r.std_total_regret);
    }
  }
  if (!(hi > 0)) {
    lo = 1.0;
    hi = 10.0;
  }
  const double dec_lo = std::floor(std::log10(lo)) - 0.0;
  const double dec_hi = std::max(dec_lo + 1.0, std::ceil(std::log10(hi)));
  auto py = [&](double v) {
    const double lv = std::clamp(std::log10(std::max(v, 1e-300)), dec_lo, dec_hi);
    return f.top + f.plot_h() * (1.0 - (lv - dec_lo) / (dec_hi - dec_lo));
  };

  std::string s = svg_open(f, "Mean total regret by exploration exponent (log scale)");
  for (double d = dec_lo; d <= dec_hi + 1e-9; d += 1.0) {
    const double v = std::pow(10.0, d);
    s += "<line x1=\"" + fmt(f.left) + "\" y1=\"" + fmt(py(v)) + "\" x2=\"" +
         fmt(f.left + f.plot_w()) + "\" y2=\"" + fmt(py(v)) + "\" stroke=\"#dddddd\"/>\n";
    s += text(f.left - 6, py(v) + 4, short_number(v), "end");
  }
  const double slot = rows.empty() ? f.plot_w() : f.plot_w() / static_cast<double>(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    const double cx = f.left + slot * (static_cast<double>(i) + 0.5);
    const double w = slot * 0.6;
    const double top = py(r.mean_total_regret);
    const double base = f.top + f.plot_h();
    s += "<rect x=\"" + fmt(cx - w / 2) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(w) +
         "\" height=\"" + fmt(base - top) + "\" fill=\"#88ccee\" stroke=\"#336688\"/>\n";
    const double up = py(r.mean_total_regret + r.std_total_regret);
    const double down_v = r.mean_total_regret - r.std_total_regret;
    const double down = down_v > 0 ? py(down_v) : base;
    s += "<line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(up) + "\" x2=\"" + fmt(cx) + "\" y2=\"" +
         fmt(down) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(cx - w / 6) + "\" y1=\"" + fmt(up) + "\" x2=\"" + fmt(cx + w / 6) +
         "\" y2=\"" + fmt(up) + "\" stroke=\"black\"/>\n";
    s += text(cx, base + 18, r.label == "greedy" ? r.label : "p=" + r.label, "middle");
  }
  s += "</svg>\n";
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace regret_floor::io
