#ifndef SAFESEEK_BARRIER_HPP
#define SAFESEEK_BARRIER_HPP

#include <stdexcept>

#include "safeseek/geometry.hpp"

namespace safeseek {

/// Unicycle state lifted to (x, y, v, xdot, ydot), with the heading kept
/// explicitly. On the admissible manifold xdot = v cos(theta), ydot = v sin(theta).
struct ExtendedState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double xdot = 0.0;
  double ydot = 0.0;

  static ExtendedState from_pose(double x, double y, double theta, double v);
  /// Heading recovered from the velocity components; requires v > 0.
  static ExtendedState from_extended(double x, double y, double v, double xdot, double ydot);

  Vec2 position() const { return {x, y}; }
  Vec2 heading() const;
  /// Recomputes xdot, ydot from (v, theta).
  void resync();
  bool on_manifold(double tol = 1e-9) const;
};

struct DValue {
  double value = 0.0;
  double slope = 0.0;  // dD/dd_ro
};

/// Distance shaping function D(d_ro).
///  smooth_bump:    c - exp(1/(gamma (d_ro - d_cons)))  for d_ro < d_cons, c above,
///                  with c = exp(-1/(gamma d_cons)).
///  plain_distance: D = d_ro.
class DFunction {
 public:
  enum class Kind { smooth_bump, plain_distance };

  static DFunction smooth_bump(double gamma, double d_cons);
  /// d_cons only matters for the out-of-range value D(d_cons) = d_cons.
  static DFunction plain_distance(double d_cons = 0.0) {
    return DFunction(Kind::plain_distance, 0.0, d_cons);
  }

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double d_cons() const { return d_cons_; }
  /// Plateau value c; for plain_distance the value reported when nothing is in range.
  double plateau() const;
  DValue operator()(double d_ro) const;

 private:
  DFunction(Kind kind, double gamma, double d_cons) : kind_(kind), gamma_(gamma), d_cons_(d_cons) {}
  Kind kind_;
  double gamma_;
  double d_cons_;
};

inline DValue eval_D(double d_ro, const DFunction& dfun) { return dfun(d_ro); }

/// alpha(h) = gain * h.
struct ClassK {
  double gain = 1.0;
  double operator()(double h) const { return gain * h; }
};

class BarrierDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZcbfValue {
  double h = 0.0;
  double D = 0.0;
  double dD = 0.0;
  double p_o = 0.0;       // <o_r, o_ro>
  double p_o_perp = 0.0;  // <o_r, perp(o_ro)>
  double P = 0.0;         // p_o + v delta
};

/// h = D(d_ro) exp(-(p_o + v delta)). Throws BarrierDomainError when v <= 0 or
/// the robot is on/inside the obstacle boundary.
ZcbfValue eval_zcbf(const ExtendedState& state, const ClosestObstacleQuery& query, double delta,
                    const DFunction& dfun);

struct BarrierEval {
  double h = 0.0;
  double D = 0.0;
  double Lfh = 0.0;
  Vec2 Lgh{0.0, 0.0};  // sensitivities to (a, omega)
  double alpha_h = 0.0;
  double H = 0.0;  // Lfh + Lgh u_ref + alpha(h)
  double p_o = 0.0;
  double p_o_perp = 0.0;
  bool active = false;
};

/// Lie derivatives of h along the drift and input columns of the extended
/// dynamics. H/alpha_h/active are left for with_reference().
///   Lgh = D exp(-P) [-delta, p_o_perp]
///   Lfh = v exp(-P) [-dD p_o + D (1 - p_o^2) / rho]
/// with rho the curvature distance of the active boundary feature.
BarrierEval lie_derivatives(const ExtendedState& state, const ClosestObstacleQuery& query,
                            double delta, const DFunction& dfun);

/// Fills alpha_h, H and the active flag for a given reference input.
BarrierEval with_reference(BarrierEval eval, const Vec2& u_ref, const ClassK& alpha);

/// Nothing in sensor range: d_ro is treated as d_cons, so D sits on its plateau
/// and the filter cannot act.
BarrierEval out_of_range_barrier(const DFunction& dfun, const Vec2& u_ref, const ClassK& alpha);

struct RcbfEval {
  double B = 0.0;
  double LfB = 0.0;
  double LgB = 0.0;  // sensitivity to omega
  double h = 0.0;    // 1 / B
  double alpha3_h = 0.0;
  double D = 0.0;
  double P = 0.0;  // wrap(theta - beta) delta
};

/// Reciprocal barrier B = 1 / (D exp(P)), P = wrap(theta - beta) delta, on the
/// unicycle with v as a time-varying drift. Throws BarrierDomainError for D <= 0.
RcbfEval eval_rcbf(double theta, double v, const ClosestObstacleQuery& query, double delta,
                   const DFunction& dfun, const ClassK& alpha3);

}  // namespace safeseek

#endif  // SAFESEEK_BARRIER_HPP
