#ifndef SAFESEEK_HARNESS_HPP
#define SAFESEEK_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "safeseek/field.hpp"
#include "safeseek/geometry.hpp"
#include "safeseek/sim.hpp"

namespace safeseek {

struct McVariant {
  std::string name;
  ControllerConfig controller;
};

struct McConfig {
  int runs = 50;
  std::uint64_t seed = 1;
  Rect workspace{{0.0, 0.0}, {10.0, 10.0}};
  int obstacle_count = 9;
  std::vector<double> radius_set{0.7, 0.8, 0.9, 1.0, 1.2};
  double d_safe = 0.1;
  double d_min = 0.8;
  Mat2 hessian = Mat2::Identity();
  Vec2 source{0.0, 0.0};
  double initial_speed = 0.1;
  double dt = 0.01;
  double t_max = 120.0;
  double stop_radius = 0.05;
  double v_floor = 1e-3;
  double max_range = kInf;
  // Rejection-sampling budget per obstacle and per initial pose.
  int max_attempts = 100000;
  // 0 picks the hardware concurrency.
  int threads = 0;
  std::vector<McVariant> variants;

  /// Throws std::invalid_argument.
  void validate() const;
};

/// One seeded trial shared by every variant.
struct McTrial {
  int run = 0;
  std::uint64_t seed = 0;
  Environment env;
  ExtendedState initial;
  std::uint64_t env_hash = 0;
};

struct McRow {
  int run = 0;
  std::string variant;
  std::uint64_t seed = 0;
  std::uint64_t env_hash = 0;
  std::optional<double> t_c;
  double d_obs = kInf;
  TerminalStatus status = TerminalStatus::timeout;
  double final_distance = 0.0;
  double sim_time = 0.0;
};

/// Box-plot statistics; quartiles by linear interpolation between order
/// statistics (R type 7), whiskers at the most extreme samples within 1.5 IQR.
struct BoxStats {
  std::size_t count = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;
};

struct VariantSummary {
  std::string variant;
  int runs = 0;
  int converged = 0;
  int timeouts = 0;
  int violations = 0;
  int degenerate = 0;
  int trespass = 0;  // rows with D_obs < d_safe
  BoxStats t_c;      // over rows with finite T_c
  BoxStats d_obs;    // over rows with finite D_obs
};

struct McReport {
  McConfig config;
  std::vector<McRow> rows;  // ordered by (run, variant index)
  std::vector<VariantSummary> summaries;
};

/// First logged time with |p - source| <= 0.2 |p(0) - source|.
std::optional<double> metric_Tc(const TrajectoryLog& log, const Vec2& source);
/// Minimum logged distance to an obstacle boundary; +inf when none was seen.
double metric_Dobs(const TrajectoryLog& log);

/// Type-7 quantile of an ascending sample, p in [0, 1].
double quantile_type7(const std::vector<double>& sorted, double p);
BoxStats box_stats(std::vector<double> samples);

/// Environment and initial pose for one run index. Throws std::runtime_error
/// when rejection sampling exhausts its budget.
McTrial make_trial(const McConfig& config, int run);

/// Stable 64-bit hash of the obstacle layout and initial state.
std::uint64_t trial_hash(const Environment& env, const ExtendedState& initial);

McReport run_monte_carlo(const McConfig& config);

struct CensusLine {
  std::string variant;
  bool passed = false;
  std::string detail;
};

/// Per-variant safety census. zcbf rows must all converge with D_obs >= d_safe;
/// rcbf rows must converge with D_obs >= d_safe - slack and D_obs > 0; other
/// kinds must converge without a safety violation.
std::vector<CensusLine> safety_census(const McReport& report, double rcbf_slack = 0.02);

/// The Monte-Carlo protocol of the evaluation: 50 runs, k1 = 0.3, k2 = 30,
/// plain-distance D, ZCBF against RCBF.
McConfig paper_mc_config(std::uint64_t seed = 1);

}  // namespace safeseek

#endif  // SAFESEEK_HARNESS_HPP
