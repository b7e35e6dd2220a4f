#include "safeseek/sim.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "safeseek/sensor.hpp"

namespace safeseek {

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::zcbf: return "zcbf";
    case ControllerKind::rcbf: return "rcbf";
    case ControllerKind::nominal: return "nominal";
    case ControllerKind::unicycle: return "unicycle";
  }
  return "unknown";
}

std::optional<ControllerKind> parse_controller_kind(std::string_view name) {
  for (auto k : {ControllerKind::zcbf, ControllerKind::rcbf, ControllerKind::nominal,
                 ControllerKind::unicycle}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::converged: return "converged";
    case TerminalStatus::timeout: return "timeout";
    case TerminalStatus::safety_violation: return "safety_violation";
    case TerminalStatus::qp_degenerate: return "qp_degenerate";
  }
  return "unknown";
}

DFunction ControllerConfig::d_function(const Environment& env) const {
  if (d_kind == DFunction::Kind::plain_distance) return DFunction::plain_distance(env.d_cons());
  return DFunction::smooth_bump(gamma, env.d_cons());
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("sim config: " + msg); };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(t_max > dt)) fail("t_max must exceed dt");
  if (!(stop_radius > 0.0)) fail("stop_radius must be positive");
  if (!(v_floor > 0.0)) fail("v_floor must be positive");
  if (!(max_range > 0.0)) fail("max_range must be positive");
  controller.gains.validate();
  if (!(controller.delta >= 0.0)) fail("delta must be non-negative");
  if (!(controller.kappa > 0.0) || !(controller.kappa3 > 0.0)) fail("kappa, kappa3 must be positive");
  if (controller.d_kind == DFunction::Kind::smooth_bump && !(controller.gamma > 0.0)) {
    fail("gamma must be positive");
  }
  if (controller.box && controller.box->empty()) fail("input box is empty");
  if (!(controller.velocity_tracking_gain >= 0.0)) fail("velocity_tracking_gain must be >= 0");
  const bool extended =
      controller.kind == ControllerKind::zcbf || controller.kind == ControllerKind::nominal;
  if (extended && !(initial.v > 0.0)) fail("initial speed must be positive");
  if (extended && !initial.on_manifold(1e-9)) {
    fail("initial velocity components must equal v (cos theta, sin theta)");
  }
}

void SimConfig::validate_against(const Environment& env) const {
  validate();
  std::optional<ClosestObstacleQuery> q;
  try {
    q = closest_obstacle(initial.position(), env, 0.0);
  } catch (const PenetrationError& e) {
    throw std::invalid_argument("sim config: initial position inside obstacle " +
                                std::to_string(e.obstacle_index()));
  }
  if (q && !(q->d_ro > 0.0)) {
    throw std::invalid_argument("sim config: initial position within the safety margin of obstacle " +
                                std::to_string(q->obstacle_index));
  }
}

ClosedLoop::ClosedLoop(SimConfig config, const Environment& env, const SourceField& field)
    : config_(std::move(config)), env_(env), field_(field), d_fn_(config_.controller.d_function(env)) {
  config_.validate();
}

void ClosedLoop::integrate(ExtendedState& s, double v_cmd, double omega_cmd, double accel,
                           StepRecord& rec) const {
  const double dt = config_.dt;
  const double c = std::cos(s.theta);
  const double sn = std::sin(s.theta);
  s.x += dt * v_cmd * c;
  s.y += dt * v_cmd * sn;
  s.theta = wrap_angle(s.theta + dt * omega_cmd);
  const bool extended = config_.controller.kind == ControllerKind::zcbf ||
                        config_.controller.kind == ControllerKind::nominal;
  if (extended) {
    s.v = v_cmd + dt * accel;
    if (s.v <= config_.v_floor) {
      s.v = config_.v_floor;
      rec.v_clamped = true;
    }
  } else {
    s.v = v_cmd;
  }
  s.resync();
}

StepOutcome ClosedLoop::step(const ExtendedState& state, double time) {
  const auto& ctl = config_.controller;
  const Vec2 p = state.position();
  const SensorReading truth = sensor_read(p, env_, field_, time);

  StepRecord rec;
  rec.time = time;
  rec.x = state.x;
  rec.y = state.y;
  rec.theta = state.theta;
  rec.v = state.v;
  rec.distance_to_source = (p - field_.source()).norm();
  std::optional<ClosestObstacleQuery> seen;
  if (truth.obstacle) {
    rec.d_ro = truth.obstacle->d_ro;
    rec.distance_boundary = truth.obstacle->distance_boundary;
    rec.obstacle_index = truth.obstacle->obstacle_index;
    if (truth.obstacle->distance_boundary <= config_.max_range) seen = truth.obstacle;
  }
  rec.in_range = seen.has_value();

  const SeekReference ref = seek_reference(state.theta, truth.gradient, ctl.gains);
  ExtendedState next = state;

  switch (ctl.kind) {
    case ControllerKind::zcbf:
    case ControllerKind::nominal: {
      const double a_s = accel_.push(time, ref.v_s);
      const double a_ref = a_s + ctl.velocity_tracking_gain * (ref.v_s - state.v);
      const Vec2 u_ref(a_ref, ref.omega_s);
      const ClassK alpha{ctl.kappa};
      const BarrierEval eval = seen
                                   ? with_reference(lie_derivatives(state, *seen, ctl.delta, d_fn_),
                                                    u_ref, alpha)
                                   : out_of_range_barrier(d_fn_, u_ref, alpha);
      QpResult qp;
      qp.u_star = u_ref;
      if (ctl.kind == ControllerKind::zcbf) {
        qp = ctl.box ? solve_boxed_qp(eval, u_ref, *ctl.box) : solve_zcbf_qp(eval, u_ref);
      }
      rec.u_ref = u_ref;
      rec.u_star = qp.u_star;
      rec.h = eval.h;
      rec.H = eval.H;
      rec.lambda = qp.lambda_star;
      rec.qp_case = qp.qp_case;
      rec.active = qp.qp_case == QpCase::projected;
      integrate(next, state.v, qp.u_star.y(), qp.u_star.x(), rec);
      break;
    }
    case ControllerKind::rcbf: {
      double omega = ref.omega_s;
      rec.h = d_fn_.plateau();
      if (seen) {
        try {
          const RcbfEval r =
              eval_rcbf(state.theta, ref.v_s, *seen, ctl.delta, d_fn_, ClassK{ctl.kappa3});
          const ScalarQpResult qp = solve_rcbf_qp(r, ref.omega_s);
          omega = qp.omega_star;
          rec.h = r.h;
          rec.H = r.alpha3_h - r.LfB - r.LgB * ref.omega_s;
          rec.lambda = qp.lambda_star;
          rec.qp_case = qp.qp_case;
          rec.active = qp.qp_case == QpCase::projected;
        } catch (const BarrierDomainError&) {
          rec.barrier_undefined = true;
          rec.h = d_fn_(seen->d_ro).value;
        }
      }
      rec.v = ref.v_s;
      rec.u_ref = Vec2(ref.v_s, ref.omega_s);
      rec.u_star = Vec2(ref.v_s, omega);
      integrate(next, ref.v_s, omega, 0.0, rec);
      break;
    }
    case ControllerKind::unicycle: {
      rec.v = ref.v_s;
      rec.u_ref = Vec2(ref.v_s, ref.omega_s);
      rec.u_star = rec.u_ref;
      integrate(next, ref.v_s, ref.omega_s, 0.0, rec);
      break;
    }
  }
  return {next, rec};
}

TrajectoryLog run(const SimConfig& config, const Environment& env, const SourceField& field) {
  config.validate_against(env);
  const auto started = std::chrono::steady_clock::now();
  ClosedLoop loop(config, env, field);
  TrajectoryLog log;
  const auto last_step = static_cast<long long>(std::llround(config.t_max / config.dt));
  log.records.reserve(static_cast<std::size_t>(std::min<long long>(last_step + 1, 1 << 20)));

  ExtendedState state = config.initial;
  for (long long k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    StepOutcome out;
    try {
      out = loop.step(state, t);
    } catch (const PenetrationError& e) {
      StepRecord rec;
      rec.time = t;
      rec.x = state.x;
      rec.y = state.y;
      rec.theta = state.theta;
      rec.v = state.v;
      rec.distance_boundary = e.distance_boundary();
      rec.d_ro = e.distance_boundary() - env.d_safe;
      rec.obstacle_index = e.obstacle_index();
      rec.distance_to_source = (state.position() - field.source()).norm();
      log.records.push_back(rec);
      log.status = TerminalStatus::safety_violation;
      log.violating_obstacle = e.obstacle_index();
      break;
    }
    log.records.push_back(out.record);
    if (out.record.distance_to_source <= config.stop_radius) {
      log.status = TerminalStatus::converged;
      break;
    }
    if (out.record.qp_case == QpCase::degenerate) {
      log.status = TerminalStatus::qp_degenerate;
      break;
    }
    if (k >= last_step) {
      log.status = TerminalStatus::timeout;
      break;
    }
    state = out.next;
  }
  log.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return log;
}

}  // namespace safeseek
