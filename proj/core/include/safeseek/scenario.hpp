#ifndef SAFESEEK_SCENARIO_HPP
#define SAFESEEK_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "safeseek/field.hpp"
#include "safeseek/geometry.hpp"
#include "safeseek/harness.hpp"
#include "safeseek/sim.hpp"

namespace safeseek {

/// Parse or validation failure, located in the source text when possible.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& message, std::string key, int line = -1, int column = -1);
  const std::string& key() const { return key_; }
  int line() const { return line_; }  // 1-based, -1 when unknown
  int column() const { return column_; }

 private:
  std::string key_;
  int line_;
  int column_;
};

struct OutputSpec {
  std::string dir = "out";
  std::string prefix;  // empty: use the scenario name
};

/// A single closed-loop run.
struct Scenario {
  std::string name;
  Mat2 hessian = Mat2::Identity();
  Vec2 source{0.0, 0.0};
  Environment env;
  SimConfig sim;
  // Draw every path-loop phase uniformly from [0, perimeter) using the run seed.
  bool randomize_phases = false;
  std::uint64_t seed = 0;
  OutputSpec output;

  SourceField field() const { return SourceField::quadratic(hessian, source); }
  /// Environment with phases applied for `seed` when randomize_phases is set.
  Environment environment_for_seed(std::uint64_t seed) const;
};

struct McScenario {
  std::string name;
  McConfig config;
  OutputSpec output;
};

/// Either document kind; a file holding `monte_carlo:` at the top level is an McScenario.
bool is_monte_carlo_document(const std::string& text);

/// Parses and validates. Unknown keys, wrong types, invalid environments and
/// initial states inside the safety margin all raise ScenarioError.
Scenario parse_scenario(const std::string& text);
McScenario parse_mc_scenario(const std::string& text);

std::string serialize_scenario(const Scenario& scenario);
std::string serialize_mc_scenario(const McScenario& scenario);

/// Reads a file; errors mention the path.
std::string read_text_file(const std::string& path);

/// Bundled scenarios: fig2a, fig2b, gazebo_replica. Throws std::invalid_argument otherwise.
Scenario builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();
/// Bundled Monte-Carlo campaign: paper_mc.
McScenario builtin_mc_scenario(const std::string& name);

/// Shifts every path-loop phase to a seeded uniform draw on [0, perimeter).
void randomize_path_phases(Environment& env, std::uint64_t seed);

}  // namespace safeseek

#endif  // SAFESEEK_SCENARIO_HPP
