#ifndef SAFESEEK_GEOMETRY_HPP
#define SAFESEEK_GEOMETRY_HPP

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace safeseek {

using Vec2 = Eigen::Vector2d;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Counter-clockwise quarter turn: (x, y) -> (-y, x).
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

/// Capsule of half-width thickness/2 around the segment [a, b].
struct Segment {
  Vec2 a;
  Vec2 b;
  double thickness = 0.0;
};

using Shape = std::variant<Circle, Segment>;

struct ConstantVelocity {
  Vec2 velocity;
};

/// Closed polyline loop traversed at constant speed. The obstacle sits at its
/// declared pose when the path parameter is at waypoints[0]; `phase` is the
/// arc length already travelled at t = 0.
struct PathLoop {
  std::vector<Vec2> waypoints;
  double speed = 0.0;
  double phase = 0.0;

  double perimeter() const;
  Vec2 point_at(double arc_length) const;
};

using Motion = std::variant<ConstantVelocity, PathLoop>;

struct Obstacle {
  Shape shape;
  std::optional<Motion> motion;

  /// Displacement of the shape relative to its declared pose at time t.
  Vec2 displacement(double time) const;
  /// Static snapshot of the shape at time t.
  Shape shape_at(double time) const;
  bool is_moving() const { return motion.has_value(); }
};

struct Rect {
  Vec2 min{0.0, 0.0};
  Vec2 max{0.0, 0.0};

  bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
};

struct Environment {
  std::vector<Obstacle> obstacles;
  Rect bounds;
  double d_safe = 0.1;
  double d_min = 0.8;

  /// Width of the band above the safety margin in which the barrier ramps.
  double d_cons() const { return 0.5 * d_min - d_safe; }
};

struct EnvironmentViolation {
  // -1 in both slots for environment-wide problems (d_cons, parameters).
  int first = -1;
  int second = -1;
  double clearance = 0.0;
  std::string message;
};

class InvalidEnvironment : public std::runtime_error {
 public:
  explicit InvalidEnvironment(std::vector<EnvironmentViolation> violations);
  const std::vector<EnvironmentViolation>& violations() const { return violations_; }

 private:
  std::vector<EnvironmentViolation> violations_;
};

/// The robot is on or inside an obstacle boundary.
class PenetrationError : public std::runtime_error {
 public:
  PenetrationError(int obstacle_index, double distance_boundary);
  int obstacle_index() const { return obstacle_index_; }
  double distance_boundary() const { return distance_boundary_; }

 private:
  int obstacle_index_;
  double distance_boundary_;
};

struct ClosestObstacleQuery {
  double distance_boundary = kInf;
  double d_ro = kInf;
  Vec2 closest_point{0.0, 0.0};
  Vec2 o_ro{1.0, 0.0};
  double beta = 0.0;
  int obstacle_index = -1;
  // Distance from the robot to the centre of curvature of the active boundary
  // feature; infinite on flat faces. Drives the derivative of o_ro.
  double feature_radius = kInf;
};

/// Boundary distance and closest-point data for a single shape; no penetration check.
ClosestObstacleQuery closest_point_on(const Shape& shape, const Vec2& position);

/// Nearest obstacle at `time`, lowest index on ties. Empty when there are no obstacles.
/// Throws PenetrationError when the position is on or inside any obstacle.
std::optional<ClosestObstacleQuery> closest_obstacle(const Vec2& position, const Environment& env,
                                                     double time);

/// Boundary-to-boundary clearance between two shapes (0 when they overlap).
double shape_clearance(const Shape& a, const Shape& b);

/// Diagnostics for parameter sanity, shape invariants, d_cons > 0 and pairwise
/// clearance >= d_min. Moving obstacles are checked over one loop period.
std::vector<EnvironmentViolation> validate_environment(const Environment& env);

/// Returns `env` unchanged, or throws InvalidEnvironment.
Environment make_environment(Environment env);

}  // namespace safeseek

#endif  // SAFESEEK_GEOMETRY_HPP
