#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "safeseek/harness.hpp"

using namespace safeseek;

namespace {

McConfig small_config() {
  McConfig c = paper_mc_config(3);
  c.runs = 6;
  c.threads = 3;
  return c;
}

}  // namespace

TEST(Harness, QuantileType7ReferenceValues) {
  // Values as produced by R's quantile(x, type = 7).
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  EXPECT_DOUBLE_EQ(quantile_type7(a, 0.25), 3.25);
  EXPECT_DOUBLE_EQ(quantile_type7(a, 0.5), 5.5);
  EXPECT_DOUBLE_EQ(quantile_type7(a, 0.75), 7.75);
  const std::vector<double> b{1, 3, 7, 15};
  EXPECT_DOUBLE_EQ(quantile_type7(b, 0.25), 2.5);
  EXPECT_DOUBLE_EQ(quantile_type7(b, 0.5), 5.0);
  EXPECT_DOUBLE_EQ(quantile_type7(b, 0.75), 9.0);
  EXPECT_DOUBLE_EQ(quantile_type7({4.0}, 0.3), 4.0);
  EXPECT_DOUBLE_EQ(quantile_type7(b, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_type7(b, 1.0), 15.0);
}

TEST(Harness, BoxStatsWhiskersAndOutliers) {
  const auto s = box_stats({10, 1, 2, 3, 4, 5, 6, 7, 8, 9, 40});
  EXPECT_EQ(s.count, 11u);
  EXPECT_DOUBLE_EQ(s.median, 6);
  EXPECT_DOUBLE_EQ(s.q1, 3.5);
  EXPECT_DOUBLE_EQ(s.q3, 8.5);
  EXPECT_DOUBLE_EQ(s.whisker_low, 1);
  EXPECT_DOUBLE_EQ(s.whisker_high, 10);
  ASSERT_EQ(s.outliers.size(), 1u);
  EXPECT_DOUBLE_EQ(s.outliers[0], 40);
  EXPECT_EQ(box_stats({}).count, 0u);
}

TEST(Harness, Metrics) {
  TrajectoryLog log;
  for (int k = 0; k <= 10; ++k) {
    StepRecord r;
    r.time = 0.1 * k;
    r.x = 10.0 - k;
    r.distance_to_source = r.x;
    r.distance_boundary = k == 4 ? 0.3 : (k == 7 ? kInf : 1.0);
    log.records.push_back(r);
  }
  const auto tc = metric_Tc(log, {0, 0});
  ASSERT_TRUE(tc);
  EXPECT_NEAR(*tc, 0.8, 1e-12);  // first sample at <= 2 m
  EXPECT_DOUBLE_EQ(metric_Dobs(log), 0.3);
  TrajectoryLog empty;
  EXPECT_THROW(metric_Dobs(empty), std::invalid_argument);
}

TEST(Harness, TrialsRespectLayoutRules) {
  const McConfig c = small_config();
  for (int run = 0; run < c.runs; ++run) {
    const McTrial t = make_trial(c, run);
    ASSERT_EQ(static_cast<int>(t.env.obstacles.size()), c.obstacle_count);
    EXPECT_TRUE(validate_environment(t.env).empty());
    for (const auto& o : t.env.obstacles) {
      const auto& circle = std::get<Circle>(o.shape);
      EXPECT_TRUE(c.workspace.contains(circle.center));
      EXPECT_NE(std::find(c.radius_set.begin(), c.radius_set.end(), circle.radius), c.radius_set.end());
    }
    EXPECT_TRUE(c.workspace.contains(t.initial.position()));
    const auto q = closest_obstacle(t.initial.position(), t.env, 0.0);
    ASSERT_TRUE(q);
    EXPECT_GE(q->d_ro, t.env.d_cons());
    EXPECT_DOUBLE_EQ(t.initial.v, c.initial_speed);
    EXPECT_TRUE(t.initial.on_manifold());
    EXPECT_EQ(t.env_hash, trial_hash(t.env, t.initial));
  }
  EXPECT_NE(make_trial(c, 0).env_hash, make_trial(c, 1).env_hash);
}

TEST(Harness, MonteCarloIsDeterministicAcrossThreadCounts) {
  McConfig a = small_config();
  McConfig b = small_config();
  b.threads = 1;
  const auto ra = run_monte_carlo(a);
  const auto rb = run_monte_carlo(b);
  ASSERT_EQ(ra.rows.size(), rb.rows.size());
  ASSERT_EQ(ra.rows.size(), static_cast<std::size_t>(a.runs) * a.variants.size());
  for (std::size_t i = 0; i < ra.rows.size(); ++i) {
    EXPECT_EQ(ra.rows[i].variant, rb.rows[i].variant);
    EXPECT_EQ(ra.rows[i].env_hash, rb.rows[i].env_hash);
    EXPECT_EQ(ra.rows[i].t_c, rb.rows[i].t_c);
    EXPECT_EQ(ra.rows[i].d_obs, rb.rows[i].d_obs);
    EXPECT_EQ(ra.rows[i].status, rb.rows[i].status);
  }
  // Variants share the trial of each run.
  EXPECT_EQ(ra.rows[0].env_hash, ra.rows[1].env_hash);
}

TEST(Harness, SummaryRecomputesFromRows) {
  const auto r = run_monte_carlo(small_config());
  for (const auto& s : r.summaries) {
    std::vector<double> tc, dobs;
    int converged = 0, trespass = 0;
    for (const auto& row : r.rows) {
      if (row.variant != s.variant) continue;
      if (row.t_c) tc.push_back(*row.t_c);
      if (std::isfinite(row.d_obs)) dobs.push_back(row.d_obs);
      converged += row.status == TerminalStatus::converged;
      trespass += row.d_obs < r.config.d_safe;
    }
    std::sort(tc.begin(), tc.end());
    EXPECT_EQ(s.converged, converged);
    EXPECT_EQ(s.trespass, trespass);
    ASSERT_EQ(s.t_c.count, tc.size());
    if (!tc.empty()) {
      EXPECT_DOUBLE_EQ(s.t_c.q1, quantile_type7(tc, 0.25));
      EXPECT_DOUBLE_EQ(s.t_c.median, quantile_type7(tc, 0.5));
      EXPECT_DOUBLE_EQ(s.t_c.q3, quantile_type7(tc, 0.75));
    }
    EXPECT_EQ(s.d_obs.count, dobs.size());
  }
}

TEST(Harness, CensusRules) {
  McReport r;
  r.config = small_config();
  McRow ok{0, "zcbf", 1, 1, 1.0, 0.15, TerminalStatus::converged, 0.04, 3.0};
  McRow close = ok;
  close.variant = "rcbf";
  close.d_obs = 0.085;
  r.rows = {ok, close};
  auto lines = safety_census(r);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_TRUE(lines[0].passed);
  EXPECT_TRUE(lines[1].passed);
  r.rows[0].d_obs = 0.0999;
  r.rows[1].status = TerminalStatus::timeout;
  lines = safety_census(r);
  EXPECT_FALSE(lines[0].passed);
  EXPECT_FALSE(lines[1].passed);
}

TEST(Harness, ConfigValidation) {
  McConfig c = small_config();
  c.runs = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.variants.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = small_config();
  c.radius_set.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
