#include "safeseek/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

namespace safeseek {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// JSON has no infinity; unbounded distances become null.
nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(); }

nlohmann::json box_json(const BoxStats& b) {
  nlohmann::json j;
  j["count"] = b.count;
  if (b.count == 0) return j;
  j["median"] = b.median;
  j["q1"] = b.q1;
  j["q3"] = b.q3;
  j["whisker_low"] = b.whisker_low;
  j["whisker_high"] = b.whisker_high;
  j["outliers"] = b.outliers;
  return j;
}

}  // namespace

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols{
      "time",     "x",          "y",      "theta",  "v",        "u_ref_0",     "u_ref_1",
      "u_star_0", "u_star_1",   "h",      "H",      "lambda",   "active",      "qp_case",
      "d_ro",     "distance_boundary", "obstacle_index", "distance_to_source", "in_range",
      "v_clamped", "barrier_undefined"};
  return cols;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  const auto& cols = trajectory_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : log.records) {
    out << num(r.time) << ',' << num(r.x) << ',' << num(r.y) << ',' << num(r.theta) << ',' << num(r.v)
        << ',' << num(r.u_ref.x()) << ',' << num(r.u_ref.y()) << ',' << num(r.u_star.x()) << ','
        << num(r.u_star.y()) << ',' << num(r.h) << ',' << num(r.H) << ',' << num(r.lambda) << ','
        << int(r.active) << ',' << to_string(r.qp_case) << ',' << num(r.d_ro) << ','
        << num(r.distance_boundary) << ',' << r.obstacle_index << ',' << num(r.distance_to_source) << ','
        << int(r.in_range) << ',' << int(r.v_clamped) << ',' << int(r.barrier_undefined) << '\n';
  }
}

RunSummary summarize(const TrajectoryLog& log, const Vec2& source, const std::string& scenario,
                     const std::string& controller, std::uint64_t seed) {
  RunSummary s;
  s.scenario = scenario;
  s.controller = controller;
  s.seed = seed;
  s.status = log.status;
  s.steps = log.records.size();
  s.violating_obstacle = log.violating_obstacle;
  s.wall_time_s = log.wall_time_s;
  if (log.records.empty()) return s;
  s.final_time = log.records.back().time;
  s.final_distance_to_source = log.records.back().distance_to_source;
  s.t_c = metric_Tc(log, source);
  s.d_obs = metric_Dobs(log);
  for (const auto& r : log.records) {
    s.min_d_ro = std::min(s.min_d_ro, r.d_ro);
    s.active_steps += r.active ? 1 : 0;
    s.clamped_steps += r.v_clamped ? 1 : 0;
  }
  return s;
}

std::string run_summary_json(const RunSummary& s) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = s.scenario;
  j["controller"] = s.controller;
  j["seed"] = s.seed;
  j["status"] = std::string(to_string(s.status));
  j["steps"] = s.steps;
  j["final_time"] = s.final_time;
  j["final_distance_to_source"] = s.final_distance_to_source;
  j["T_c"] = s.t_c ? nlohmann::json(*s.t_c) : nlohmann::json();
  j["D_obs"] = finite_or_null(s.d_obs);
  j["no_obstacle_encountered"] = !std::isfinite(s.d_obs);
  j["min_d_ro"] = finite_or_null(s.min_d_ro);
  j["violating_obstacle"] = s.violating_obstacle;
  j["active_steps"] = s.active_steps;
  j["clamped_steps"] = s.clamped_steps;
  j["wall_time_s"] = s.wall_time_s;
  return j.dump(2) + "\n";
}

const std::vector<std::string>& mc_row_columns() {
  static const std::vector<std::string> cols{"run",    "variant",        "seed",    "env_hash", "T_c",
                                             "D_obs", "status", "final_distance", "sim_time"};
  return cols;
}

void write_mc_rows_csv(std::ostream& out, const std::vector<McRow>& rows) {
  const auto& cols = mc_row_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.env_hash));
    out << r.run << ',' << r.variant << ',' << r.seed << ',' << hash << ','
        << (r.t_c ? num(*r.t_c) : std::string()) << ',' << num(r.d_obs) << ',' << to_string(r.status)
        << ',' << num(r.final_distance) << ',' << num(r.sim_time) << '\n';
  }
}

std::string mc_summary_json(const McReport& report, const std::string& name) {
  const McConfig& c = report.config;
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = name;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["workspace"] = {{"min", {c.workspace.min.x(), c.workspace.min.y()}},
                    {"max", {c.workspace.max.x(), c.workspace.max.y()}}};
  j["source"] = {c.source.x(), c.source.y()};
  j["d_safe"] = c.d_safe;
  j["initial_distribution"] =
      "position uniform over the workspace, rejected unless d_ro >= d_cons; heading uniform on (-pi, pi]";
  j["quantile_method"] = "type7";
  j["t_max"] = c.t_max;
  j["dt"] = c.dt;
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& s : report.summaries) {
    nlohmann::json v;
    v["variant"] = s.variant;
    v["runs"] = s.runs;
    v["converged"] = s.converged;
    v["timeouts"] = s.timeouts;
    v["safety_violations"] = s.violations;
    v["qp_degenerate"] = s.degenerate;
    v["trespass"] = s.trespass;
    v["T_c"] = box_json(s.t_c);
    v["D_obs"] = box_json(s.d_obs);
    vars.push_back(std::move(v));
  }
  j["variants"] = std::move(vars);
  return j.dump(2) + "\n";
}

}  // namespace safeseek
