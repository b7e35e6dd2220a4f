// safeseek: run scenarios, Monte-Carlo campaigns and the verification suites.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "safeseek/harness.hpp"
#include "safeseek/io.hpp"
#include "safeseek/scenario.hpp"
#include "safeseek/verify.hpp"

namespace fs = std::filesystem;
using namespace safeseek;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kNotConverged = 1;   // timeout or degenerate QP, no safety problem
constexpr int kUnsafe = 2;         // safety violation, or the census failed
constexpr int kVerifyFailed = 3;
constexpr int kUsage = 64;
constexpr int kBadInput = 65;

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
};

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

int cmd_run(const std::string& path, const Overrides& ov) {
  Scenario s;
  try {
    s = parse_scenario(read_text_file(path));
    if (ov.seed) s.seed = *ov.seed;
    if (ov.dt) s.sim.dt = *ov.dt;
    if (ov.out) s.output.dir = *ov.out;
    s.sim.validate_against(s.environment_for_seed(s.seed));
  } catch (const ScenarioError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kBadInput;
  }

  const Environment env = s.environment_for_seed(s.seed);
  const TrajectoryLog log = run(s.sim, env, s.field());
  const RunSummary sum = summarize(log, s.source, s.name, std::string(to_string(s.sim.controller.kind)), s.seed);

  std::string stem = s.output.prefix.empty() ? s.name : s.output.prefix;
  if (s.randomize_phases) stem += "_seed" + std::to_string(s.seed);
  const fs::path dir(s.output.dir);
  {
    auto f = open_out(dir / (stem + "_trajectory.csv"));
    write_trajectory_csv(f, log);
  }
  {
    auto f = open_out(dir / (stem + "_summary.json"));
    f << run_summary_json(sum);
  }

  std::cout << s.name << ": " << to_string(sum.status) << " after " << fmt(sum.final_time) << " s, distance to source "
            << fmt(sum.final_distance_to_source) << " m\n";
  std::cout << "  T_c   " << (sum.t_c ? fmt(*sum.t_c) + " s" : std::string("not reached")) << "\n";
  std::cout << "  D_obs " << (std::isfinite(sum.d_obs) ? fmt(sum.d_obs) + " m" : std::string("no obstacle encountered"))
            << "\n";
  std::cout << "  wrote " << (dir / (stem + "_trajectory.csv")).string() << " and " << stem << "_summary.json\n";

  if (sum.status == TerminalStatus::safety_violation) return kUnsafe;
  return sum.status == TerminalStatus::converged ? kOk : kNotConverged;
}

int cmd_mc(const std::string& path, const Overrides& ov) {
  McScenario s;
  try {
    s = parse_mc_scenario(read_text_file(path));
    if (ov.seed) s.config.seed = *ov.seed;
    if (ov.dt) s.config.dt = *ov.dt;
    if (ov.out) s.output.dir = *ov.out;
    s.config.validate();
  } catch (const ScenarioError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kBadInput;
  }

  McReport report;
  try {
    report = run_monte_carlo(s.config);
  } catch (const std::runtime_error& e) {
    std::cerr << "monte carlo aborted: " << e.what() << "\n";
    return kBadInput;
  }

  const std::string stem = (s.output.prefix.empty() ? s.name : s.output.prefix) + "_seed" +
                           std::to_string(s.config.seed);
  const fs::path dir(s.output.dir);
  for (const auto& v : s.config.variants) {
    std::vector<McRow> rows;
    for (const auto& r : report.rows) {
      if (r.variant == v.name) rows.push_back(r);
    }
    auto f = open_out(dir / (stem + "_" + v.name + ".csv"));
    write_mc_rows_csv(f, rows);
  }
  {
    auto f = open_out(dir / (stem + "_summary.json"));
    f << mc_summary_json(report, s.name);
  }

  std::printf("%-10s %5s %9s %8s %9s %9s %9s %9s %9s\n", "variant", "runs", "converged", "trespass", "Tc_q1",
              "Tc_med", "Tc_q3", "Dobs_min", "Dobs_med");
  for (const auto& v : report.summaries) {
    double dmin = kInf;
    for (const auto& r : report.rows) {
      if (r.variant == v.variant) dmin = std::min(dmin, r.d_obs);
    }
    std::printf("%-10s %5d %9d %8d %9.3f %9.3f %9.3f %9.4f %9.4f\n", v.variant.c_str(), v.runs, v.converged,
                v.trespass, v.t_c.q1, v.t_c.median, v.t_c.q3, dmin, v.d_obs.median);
  }
  bool ok = true;
  for (const auto& line : safety_census(report)) {
    std::cout << "census " << line.variant << ": " << (line.passed ? "PASS" : "FAIL") << " (" << line.detail << ")\n";
    ok = ok && line.passed;
  }
  std::cout << "wrote " << (dir / (stem + "_summary.json")).string() << "\n";
  return ok ? kOk : kUnsafe;
}

int cmd_verify(std::uint64_t seed, bool zero_delta) {
  VerifyOptions o;
  o.seed = seed;
  o.force_zero_delta = zero_delta;
  bool ok = true;
  for (const auto& r : run_verify(o)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kVerifyFailed;
}

int cmd_show(const std::string& name) {
  try {
    if (name == "paper_mc") {
      std::cout << serialize_mc_scenario(builtin_mc_scenario(name));
    } else {
      std::cout << serialize_scenario(builtin_scenario(name));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety-filtered source seeking for a unicycle robot"};
  app.require_subcommand(1);

  Overrides ov;
  std::string out;
  std::uint64_t seed = 0;
  double dt = 0.0;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory (overrides the file)");
    sub->add_option("--seed", seed, "Seed (obstacle phases for run, campaign seed for mc)");
    sub->add_option("--dt", dt, "Time step override [s]")->check(CLI::PositiveNumber);
  };

  std::string file;
  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario file");
  run_cmd->add_option("file", file, "Scenario file")->required();
  add_overrides(run_cmd);

  auto* mc_cmd = app.add_subcommand("mc", "Run a Monte-Carlo campaign file");
  mc_cmd->add_option("file", file, "Campaign file")->required();
  add_overrides(mc_cmd);

  bool zero_delta = false;
  std::uint64_t verify_seed = 7;
  auto* verify_cmd = app.add_subcommand("verify", "Run the built-in verification suites");
  verify_cmd->add_option("--seed", verify_seed, "Seed for the randomized suites");
  verify_cmd->add_flag("--zero-delta", zero_delta)->group("");

  std::string name;
  auto* show_cmd = app.add_subcommand("show", "Print a bundled scenario (fig2a, fig2b, gazebo_replica, paper_mc)");
  show_cmd->add_option("name", name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  auto collect = [&](CLI::App* sub) {
    if (sub->count("--out")) ov.out = out;
    if (sub->count("--seed")) ov.seed = seed;
    if (sub->count("--dt")) ov.dt = dt;
  };
  try {
    if (*run_cmd) {
      collect(run_cmd);
      return cmd_run(file, ov);
    }
    if (*mc_cmd) {
      collect(mc_cmd);
      return cmd_mc(file, ov);
    }
    if (*verify_cmd) return cmd_verify(verify_seed, zero_delta);
    if (*show_cmd) return cmd_show(name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kUsage;
}
