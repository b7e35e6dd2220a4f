#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "safeseek/io.hpp"
#include "safeseek/scenario.hpp"

using namespace safeseek;

namespace {

const char* kMinimal = R"(name: tiny
field:
  hessian: [[1, 0], [0, 1]]
  source: [0, 0]
environment:
  bounds: {min: [-5, -5], max: [5, 5]}
  obstacles:
    - circle: {center: [2, 0], radius: 0.5}
initial: {x: 4, y: 1, theta: 3.0, v: 0.3}
)";

void expect_same(const Scenario& a, const Scenario& b) {
  EXPECT_EQ(a.name, b.name);
  EXPECT_EQ(a.hessian, b.hessian);
  EXPECT_EQ(a.source, b.source);
  EXPECT_EQ(a.env.obstacles.size(), b.env.obstacles.size());
  EXPECT_EQ(a.env.d_safe, b.env.d_safe);
  EXPECT_EQ(a.env.d_min, b.env.d_min);
  EXPECT_EQ(a.sim.dt, b.sim.dt);
  EXPECT_EQ(a.sim.max_range, b.sim.max_range);
  EXPECT_EQ(a.sim.initial.x, b.sim.initial.x);
  EXPECT_EQ(a.sim.initial.theta, b.sim.initial.theta);
  EXPECT_EQ(a.sim.controller.kind, b.sim.controller.kind);
  EXPECT_EQ(a.sim.controller.gains.k2, b.sim.controller.gains.k2);
  EXPECT_EQ(a.sim.controller.delta, b.sim.controller.delta);
  EXPECT_EQ(a.randomize_phases, b.randomize_phases);
}

}  // namespace

TEST(Scenario, MinimalDocumentUsesDefaults) {
  const auto s = parse_scenario(kMinimal);
  EXPECT_EQ(s.name, "tiny");
  EXPECT_EQ(s.env.obstacles.size(), 1u);
  EXPECT_EQ(s.sim.dt, 0.01);
  EXPECT_EQ(s.sim.stop_radius, 0.05);
  EXPECT_EQ(s.sim.controller.kind, ControllerKind::zcbf);
  EXPECT_EQ(s.output.dir, "out");
}

TEST(Scenario, BuiltinsRoundTripExactly) {
  for (const auto& name : builtin_scenario_names()) {
    const auto s = builtin_scenario(name);
    const std::string text = serialize_scenario(s);
    const auto back = parse_scenario(text);
    expect_same(s, back);
    EXPECT_EQ(serialize_scenario(back), text) << name;
  }
  const auto mc = builtin_mc_scenario("paper_mc");
  const std::string text = serialize_mc_scenario(mc);
  EXPECT_TRUE(is_monte_carlo_document(text));
  const auto back = parse_mc_scenario(text);
  EXPECT_EQ(back.config.runs, 50);
  EXPECT_EQ(back.config.variants.size(), 2u);
  EXPECT_EQ(serialize_mc_scenario(back), text);
}

TEST(Scenario, UnknownKeyReportsLine) {
  std::string doc = kMinimal;
  doc += "sim: {dt: 0.01, tmax: 3}\n";
  try {
    parse_scenario(doc);
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.line(), 10);
    EXPECT_NE(std::string(e.what()).find("tmax"), std::string::npos);
  }
}

TEST(Scenario, WrongTypeReportsKey) {
  std::string doc = kMinimal;
  doc += "controller: {k1: fast}\n";
  try {
    parse_scenario(doc);
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_NE(e.key().find("k1"), std::string::npos);
    EXPECT_EQ(e.line(), 10);
  }
}

TEST(Scenario, InitialInsideObstacleRejected) {
  std::string doc = kMinimal;
  const auto pos = doc.find("x: 4, y: 1");
  doc.replace(pos, 10, "x: 2, y: 0");
  try {
    parse_scenario(doc);
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.key(), "initial");
    EXPECT_EQ(e.line(), 9);
  }
}

TEST(Scenario, ExtendedInitialMustBeOnManifold) {
  std::string doc = kMinimal;
  const auto pos = doc.find("initial:");
  doc.replace(pos, std::string::npos, "initial: {extended: [4, 1, 0.5, 0.3, 0.3]}\n");
  EXPECT_THROW(parse_scenario(doc), ScenarioError);
  doc.replace(doc.find("initial:"), std::string::npos, "initial: {extended: [4, 1, 0.5, 0.3, 0.4]}\n");
  const auto s = parse_scenario(doc);
  EXPECT_NEAR(s.sim.initial.theta, std::atan2(0.4, 0.3), 1e-15);
}

TEST(Scenario, SyntaxErrorHasPosition) {
  try {
    parse_scenario("name: [unclosed\n");
    FAIL();
  } catch (const ScenarioError& e) {
    EXPECT_GE(e.line(), 1);
  }
}

TEST(Scenario, GazeboPhasesDependOnSeed) {
  const auto s = builtin_scenario("gazebo_replica");
  const auto a = s.environment_for_seed(1);
  const auto b = s.environment_for_seed(2);
  const auto& pa = std::get<PathLoop>(*a.obstacles[4].motion);
  const auto& pb = std::get<PathLoop>(*b.obstacles[4].motion);
  EXPECT_NE(pa.phase, pb.phase);
  EXPECT_GE(pa.phase, 0.0);
  EXPECT_LT(pa.phase, pa.perimeter());
  EXPECT_EQ(pa.phase, std::get<PathLoop>(*s.environment_for_seed(1).obstacles[4].motion).phase);
}

TEST(Io, TrajectoryCsvLayout) {
  const auto s = builtin_scenario("fig2a");
  const auto log = run(s.sim, s.env, s.field());
  std::ostringstream out;
  write_trajectory_csv(out, log);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("time,x,y,theta,v,u_ref_0", 0), 0u);
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) {
    ++lines;
    EXPECT_EQ(std::count(l.begin(), l.end(), ','), static_cast<long>(trajectory_columns().size() - 1));
  }
  EXPECT_EQ(lines, log.records.size());
}

TEST(Io, RunSummaryJson) {
  const auto s = builtin_scenario("fig2a");
  const auto log = run(s.sim, s.env, s.field());
  const auto sum = summarize(log, s.source, s.name, "zcbf", 0);
  const auto j = nlohmann::json::parse(run_summary_json(sum));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["status"], "converged");
  EXPECT_TRUE(j["T_c"].is_number());
  EXPECT_TRUE(j["D_obs"].is_number());
  EXPECT_EQ(j["steps"], log.records.size());

  RunSummary empty;
  const auto k = nlohmann::json::parse(run_summary_json(empty));
  EXPECT_TRUE(k["T_c"].is_null());
  EXPECT_TRUE(k["D_obs"].is_null());
  EXPECT_TRUE(k["no_obstacle_encountered"].get<bool>());
}

TEST(Io, McSummaryJson) {
  McConfig c = paper_mc_config(2);
  c.runs = 3;
  const auto r = run_monte_carlo(c);
  const auto j = nlohmann::json::parse(mc_summary_json(r, "t"));
  EXPECT_EQ(j["quantile_method"], "type7");
  ASSERT_EQ(j["variants"].size(), 2u);
  EXPECT_EQ(j["variants"][0]["runs"], 3);
  std::ostringstream out;
  write_mc_rows_csv(out, r.rows);
  EXPECT_EQ(out.str().rfind("run,variant,seed,env_hash,T_c,D_obs,status", 0), 0u);
}
