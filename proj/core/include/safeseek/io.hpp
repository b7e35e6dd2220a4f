#ifndef SAFESEEK_IO_HPP
#define SAFESEEK_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "safeseek/harness.hpp"
#include "safeseek/sim.hpp"

namespace safeseek {

inline constexpr int kSchemaVersion = 1;

/// Trajectory CSV header, in column order.
const std::vector<std::string>& trajectory_columns();
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

struct RunSummary {
  std::string scenario;
  std::string controller;
  std::uint64_t seed = 0;
  TerminalStatus status = TerminalStatus::timeout;
  std::size_t steps = 0;
  double final_time = 0.0;
  double final_distance_to_source = 0.0;
  std::optional<double> t_c;
  double d_obs = kInf;
  double min_d_ro = kInf;
  int violating_obstacle = -1;
  std::size_t active_steps = 0;
  std::size_t clamped_steps = 0;
  double wall_time_s = 0.0;
};

RunSummary summarize(const TrajectoryLog& log, const Vec2& source, const std::string& scenario,
                     const std::string& controller, std::uint64_t seed);
std::string run_summary_json(const RunSummary& summary);

const std::vector<std::string>& mc_row_columns();
void write_mc_rows_csv(std::ostream& out, const std::vector<McRow>& rows);
std::string mc_summary_json(const McReport& report, const std::string& name);

}  // namespace safeseek

#endif  // SAFESEEK_IO_HPP
