#ifndef SAFESEEK_SIM_HPP
#define SAFESEEK_SIM_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "safeseek/barrier.hpp"
#include "safeseek/field.hpp"
#include "safeseek/geometry.hpp"
#include "safeseek/safeqp.hpp"
#include "safeseek/seek.hpp"

namespace safeseek {

enum class ControllerKind {
  zcbf,      // extended state, (a, omega) filtered by the zeroing-barrier QP
  rcbf,      // v = v_s, omega filtered by the reciprocal-barrier QP
  nominal,   // extended state, filter bypassed (u = u_ref)
  unicycle,  // raw source seeking: v = v_s, omega = omega_s
};

std::string_view to_string(ControllerKind kind);
std::optional<ControllerKind> parse_controller_kind(std::string_view name);

struct ControllerConfig {
  ControllerKind kind = ControllerKind::zcbf;
  SeekGains gains;
  double delta = 0.1;   // directional offset [s/m] (ZCBF) or heading weight (RCBF)
  double kappa = 1.0;   // alpha(h) = kappa h
  double kappa3 = 1.0;  // alpha3(h) = kappa3 h
  DFunction::Kind d_kind = DFunction::Kind::smooth_bump;
  double gamma = 2.0;
  std::optional<InputBox> box;
  // a_ref = a_s + gain (v_s - v); 0 gives the pure backward difference.
  double velocity_tracking_gain = 0.0;

  /// D function for an environment (d_cons comes from d_min and d_safe).
  DFunction d_function(const Environment& env) const;
};

struct SimConfig {
  double dt = 0.01;
  double t_max = 60.0;
  double stop_radius = 0.05;
  double v_floor = 1e-3;
  double max_range = kInf;
  ExtendedState initial;
  ControllerConfig controller;

  /// Throws std::invalid_argument on bad parameters.
  void validate() const;
  /// Additionally requires the initial position to be strictly outside the
  /// safety margin of every obstacle.
  void validate_against(const Environment& env) const;
};

struct StepRecord {
  double time = 0.0;
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v = 0.0;
  Vec2 u_ref{0.0, 0.0};   // (a_ref, omega_s), or (v_s, omega_s) for rcbf/unicycle
  Vec2 u_star{0.0, 0.0};  // applied input in the same coordinates as u_ref
  double h = 0.0;
  double H = 0.0;
  double lambda = 0.0;
  bool active = false;
  QpCase qp_case = QpCase::nominal;
  double d_ro = kInf;
  double distance_boundary = kInf;
  int obstacle_index = -1;
  double distance_to_source = 0.0;
  bool in_range = false;
  bool v_clamped = false;
  bool barrier_undefined = false;  // rcbf with D <= 0; omega_s applied
};

enum class TerminalStatus { converged, timeout, safety_violation, qp_degenerate };

std::string_view to_string(TerminalStatus status);

struct TrajectoryLog {
  std::vector<StepRecord> records;
  TerminalStatus status = TerminalStatus::timeout;
  int violating_obstacle = -1;
  double wall_time_s = 0.0;
};

struct StepOutcome {
  ExtendedState next;
  StepRecord record;
};

/// One robot in closed loop. Holds the reference-acceleration history, so a
/// single instance must be stepped in time order.
class ClosedLoop {
 public:
  ClosedLoop(SimConfig config, const Environment& env, const SourceField& field);

  /// Sense, reference, barrier, QP and one explicit Euler step from `state`
  /// at `time`. Throws PenetrationError when the state is inside an obstacle.
  StepOutcome step(const ExtendedState& state, double time);

  const SimConfig& config() const { return config_; }

 private:
  void integrate(ExtendedState& state, double v_cmd, double omega_cmd, double accel,
                 StepRecord& rec) const;

  SimConfig config_;
  const Environment& env_;
  const SourceField& field_;
  DFunction d_fn_;
  ReferenceAccelerator accel_;
};

/// Runs until the robot is within stop_radius of the source, t_max elapses,
/// an obstacle is penetrated, or the QP degenerates.
TrajectoryLog run(const SimConfig& config, const Environment& env, const SourceField& field);

}  // namespace safeseek

#endif  // SAFESEEK_SIM_HPP
