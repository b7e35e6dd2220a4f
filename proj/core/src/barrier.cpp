#include "safeseek/barrier.hpp"

#include <cmath>
#include <stdexcept>

namespace safeseek {

ExtendedState ExtendedState::from_pose(double x, double y, double theta, double v) {
  ExtendedState s{x, y, theta, v, 0.0, 0.0};
  s.resync();
  return s;
}

ExtendedState ExtendedState::from_extended(double x, double y, double v, double xdot,
                                           double ydot) {
  if (!(v > 0.0)) throw std::invalid_argument("extended state: v must be positive");
  return {x, y, std::atan2(ydot, xdot), v, xdot, ydot};
}

Vec2 ExtendedState::heading() const { return {std::cos(theta), std::sin(theta)}; }

void ExtendedState::resync() {
  xdot = v * std::cos(theta);
  ydot = v * std::sin(theta);
}

bool ExtendedState::on_manifold(double tol) const {
  return std::abs(xdot - v * std::cos(theta)) <= tol && std::abs(ydot - v * std::sin(theta)) <= tol;
}

DFunction DFunction::smooth_bump(double gamma, double d_cons) {
  if (!(gamma > 0.0) || !(d_cons > 0.0)) {
    throw std::invalid_argument("smooth_bump D: gamma and d_cons must be positive");
  }
  return DFunction(Kind::smooth_bump, gamma, d_cons);
}

double DFunction::plateau() const {
  if (kind_ == Kind::smooth_bump) return std::exp(-1.0 / (gamma_ * d_cons_));
  return d_cons_;
}

DValue DFunction::operator()(double d_ro) const {
  if (kind_ == Kind::plain_distance) return {d_ro, 1.0};
  const double c = plateau();
  if (d_ro >= d_cons_) return {c, 0.0};
  const double gap = d_ro - d_cons_;
  const double e = std::exp(1.0 / (gamma_ * gap));
  const double slope = e > 0.0 ? e / (gamma_ * gap * gap) : 0.0;
  return {c - e, slope};
}

namespace {

void require_interior(const ExtendedState& state, const ClosestObstacleQuery& query) {
  if (!(state.v > 0.0)) throw BarrierDomainError("zcbf: longitudinal speed must be positive");
  if (!(query.distance_boundary > 0.0)) {
    throw BarrierDomainError("zcbf: robot on or inside obstacle " +
                             std::to_string(query.obstacle_index));
  }
}

}  // namespace

ZcbfValue eval_zcbf(const ExtendedState& state, const ClosestObstacleQuery& query, double delta,
                    const DFunction& dfun) {
  require_interior(state, query);
  const Vec2 o_r = state.heading();
  const DValue d = dfun(query.d_ro);
  ZcbfValue z;
  z.D = d.value;
  z.dD = d.slope;
  z.p_o = o_r.dot(query.o_ro);
  z.p_o_perp = o_r.dot(perp(query.o_ro));
  z.P = z.p_o + state.v * delta;
  z.h = z.D * std::exp(-z.P);
  return z;
}

BarrierEval lie_derivatives(const ExtendedState& state, const ClosestObstacleQuery& query,
                            double delta, const DFunction& dfun) {
  const ZcbfValue z = eval_zcbf(state, query, delta, dfun);
  const double decay = std::exp(-z.P);
  const double curvature = std::isfinite(query.feature_radius) ? 1.0 / query.feature_radius : 0.0;

  BarrierEval e;
  e.h = z.h;
  e.D = z.D;
  e.p_o = z.p_o;
  e.p_o_perp = z.p_o_perp;
  e.Lgh = Vec2(-z.D * delta * decay, z.D * z.p_o_perp * decay);
  e.Lfh = state.v * decay * (-z.dD * z.p_o + z.D * (1.0 - z.p_o * z.p_o) * curvature);
  return e;
}

BarrierEval with_reference(BarrierEval eval, const Vec2& u_ref, const ClassK& alpha) {
  eval.alpha_h = alpha(eval.h);
  eval.H = eval.Lfh + eval.Lgh.dot(u_ref) + eval.alpha_h;
  eval.active = eval.H < 0.0 && eval.Lgh.squaredNorm() >= 1e-12;
  return eval;
}

BarrierEval out_of_range_barrier(const DFunction& dfun, const Vec2& u_ref, const ClassK& alpha) {
  BarrierEval e;
  e.D = dfun(dfun.d_cons()).value;
  e.h = e.D;
  return with_reference(e, u_ref, alpha);
}

RcbfEval eval_rcbf(double theta, double v, const ClosestObstacleQuery& query, double delta,
                   const DFunction& dfun, const ClassK& alpha3) {
  const DValue d = dfun(query.d_ro);
  if (!(d.value > 0.0)) {
    throw BarrierDomainError("rcbf: D <= 0, reciprocal barrier undefined at obstacle " +
                             std::to_string(query.obstacle_index));
  }
  const Vec2 o_r(std::cos(theta), std::sin(theta));
  const double p_o = o_r.dot(query.o_ro);
  const double p_o_perp = o_r.dot(perp(query.o_ro));
  const double curvature = std::isfinite(query.feature_radius) ? 1.0 / query.feature_radius : 0.0;

  RcbfEval r;
  r.D = d.value;
  r.P = wrap_angle(theta - query.beta) * delta;
  r.h = r.D * std::exp(r.P);
  r.B = 1.0 / r.h;
  r.LgB = -r.B * delta;
  r.LfB = -r.B * v * (-d.slope * p_o / r.D + delta * p_o_perp * curvature);
  r.alpha3_h = alpha3(r.h);
  return r;
}

}  // namespace safeseek
