#include "safeseek/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace safeseek {

namespace {

constexpr int kMotionSamples = 256;

// Closest point on [a, b] to p, with the clamped parameter.
std::pair<Vec2, double> project_onto_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double s = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return {a + s * ab, s};
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  return (p - project_onto_segment(p, a, b).first).norm();
}

double cross(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return false;  // collinear touching is caught by the endpoint distances
}

double segment_segment_distance(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  if (segments_intersect(p1, p2, q1, q2)) return 0.0;
  return std::min({point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2),
                   point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2)});
}

Shape translated(const Shape& shape, const Vec2& offset) {
  return std::visit(
      [&](const auto& s) -> Shape {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return Circle{s.center + offset, s.radius};
        } else {
          return Segment{s.a + offset, s.b + offset, s.thickness};
        }
      },
      shape);
}

std::string describe_pair(int i, int j, double clearance, double d_min) {
  std::ostringstream os;
  os << "obstacles " << i << " and " << j << " clearance " << clearance << " < d_min " << d_min;
  return os.str();
}

}  // namespace

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

double PathLoop::perimeter() const {
  double total = 0.0;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    total += (waypoints[(i + 1) % waypoints.size()] - waypoints[i]).norm();
  }
  return total;
}

Vec2 PathLoop::point_at(double arc_length) const {
  if (waypoints.empty()) return Vec2::Zero();
  const double total = perimeter();
  if (waypoints.size() == 1 || total <= 0.0) return waypoints.front();
  double s = std::fmod(arc_length, total);
  if (s < 0.0) s += total;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const Vec2& from = waypoints[i];
    const Vec2& to = waypoints[(i + 1) % waypoints.size()];
    const double len = (to - from).norm();
    if (s <= len || i + 1 == waypoints.size()) {
      return len > 0.0 ? Vec2(from + (to - from) * (std::min(s, len) / len)) : from;
    }
    s -= len;
  }
  return waypoints.front();
}

Vec2 Obstacle::displacement(double time) const {
  if (!motion) return Vec2::Zero();
  return std::visit(
      [&](const auto& m) -> Vec2 {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantVelocity>) {
          return m.velocity * time;
        } else {
          if (m.waypoints.empty()) return Vec2::Zero();
          return m.point_at(m.phase + m.speed * time) - m.waypoints.front();
        }
      },
      *motion);
}

Shape Obstacle::shape_at(double time) const {
  if (!motion) return shape;
  return translated(shape, displacement(time));
}

InvalidEnvironment::InvalidEnvironment(std::vector<EnvironmentViolation> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid environment:";
        for (const auto& v : violations) msg += " [" + v.message + "]";
        return msg;
      }()),
      violations_(std::move(violations)) {}

PenetrationError::PenetrationError(int obstacle_index, double distance_boundary)
    : std::runtime_error("penetration of obstacle " + std::to_string(obstacle_index) +
                         " (boundary distance " + std::to_string(distance_boundary) + ")"),
      obstacle_index_(obstacle_index),
      distance_boundary_(distance_boundary) {}

ClosestObstacleQuery closest_point_on(const Shape& shape, const Vec2& position) {
  // Both shapes are "core feature + radius": a point for circles, a segment for
  // capsules. The boundary point lies along the ray from the core point.
  Vec2 core;
  double radius = 0.0;
  bool curved = true;
  if (const auto* c = std::get_if<Circle>(&shape)) {
    core = c->center;
    radius = c->radius;
  } else {
    const auto& s = std::get<Segment>(shape);
    const auto [q, param] = project_onto_segment(position, s.a, s.b);
    core = q;
    radius = 0.5 * s.thickness;
    curved = param <= 0.0 || param >= 1.0;
  }
  const Vec2 away = position - core;
  const double core_distance = away.norm();

  ClosestObstacleQuery q;
  q.distance_boundary = core_distance - radius;
  if (core_distance > 0.0) {
    q.o_ro = -away / core_distance;
  } else {
    q.o_ro = Vec2(1.0, 0.0);
  }
  q.closest_point = core - radius * q.o_ro;
  q.beta = wrap_angle(std::atan2(q.o_ro.y(), q.o_ro.x()));
  q.feature_radius = curved ? core_distance : kInf;
  return q;
}

std::optional<ClosestObstacleQuery> closest_obstacle(const Vec2& position, const Environment& env,
                                                     double time) {
  std::optional<ClosestObstacleQuery> best;
  for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
    const auto& obstacle = env.obstacles[i];
    ClosestObstacleQuery q = closest_point_on(obstacle.shape_at(time), position);
    if (!(q.distance_boundary > 0.0)) {
      throw PenetrationError(static_cast<int>(i), q.distance_boundary);
    }
    if (!best || q.distance_boundary < best->distance_boundary) {
      q.obstacle_index = static_cast<int>(i);
      best = q;
    }
  }
  if (best) best->d_ro = best->distance_boundary - env.d_safe;
  return best;
}

double shape_clearance(const Shape& a, const Shape& b) {
  auto core_radius = [](const Shape& s) {
    return std::visit(
        [](const auto& v) -> double {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Circle>) {
            return v.radius;
          } else {
            return 0.5 * v.thickness;
          }
        },
        s);
  };
  double core_distance = 0.0;
  const auto* ca = std::get_if<Circle>(&a);
  const auto* cb = std::get_if<Circle>(&b);
  const auto* sa = std::get_if<Segment>(&a);
  const auto* sb = std::get_if<Segment>(&b);
  if (ca && cb) {
    core_distance = (ca->center - cb->center).norm();
  } else if (ca && sb) {
    core_distance = point_segment_distance(ca->center, sb->a, sb->b);
  } else if (sa && cb) {
    core_distance = point_segment_distance(cb->center, sa->a, sa->b);
  } else {
    core_distance = segment_segment_distance(sa->a, sa->b, sb->a, sb->b);
  }
  return std::max(0.0, core_distance - core_radius(a) - core_radius(b));
}

std::vector<EnvironmentViolation> validate_environment(const Environment& env) {
  std::vector<EnvironmentViolation> out;
  auto global = [&](std::string msg) { out.push_back({-1, -1, 0.0, std::move(msg)}); };

  if (!(env.d_safe > 0.0)) global("d_safe must be positive");
  if (!(env.d_min > 0.0)) global("d_min must be positive");
  if (!(env.d_cons() > 0.0)) {
    std::ostringstream os;
    os << "d_cons = d_min/2 - d_safe = " << env.d_cons() << " must be positive";
    global(os.str());
  }

  double horizon = 0.0;
  for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
    const auto& o = env.obstacles[i];
    const int idx = static_cast<int>(i);
    if (const auto* c = std::get_if<Circle>(&o.shape)) {
      if (!(c->radius > 0.0)) out.push_back({idx, idx, 0.0, "circle radius must be positive"});
    } else {
      const auto& s = std::get<Segment>(o.shape);
      if (!(s.thickness >= 0.0)) out.push_back({idx, idx, 0.0, "segment thickness must be >= 0"});
      if (s.a == s.b) out.push_back({idx, idx, 0.0, "segment endpoints must be distinct"});
    }
    if (o.motion) {
      if (const auto* loop = std::get_if<PathLoop>(&*o.motion)) {
        if (loop->waypoints.size() < 2 || !(loop->speed >= 0.0)) {
          out.push_back({idx, idx, 0.0, "path loop needs >= 2 waypoints and speed >= 0"});
        } else if (loop->speed > 0.0) {
          horizon = std::max(horizon, loop->perimeter() / loop->speed);
        }
      }
    }
  }

  std::vector<double> times{0.0};
  if (horizon > 0.0) {
    for (int k = 1; k <= kMotionSamples; ++k) times.push_back(horizon * k / kMotionSamples);
  }

  for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < env.obstacles.size(); ++j) {
      const auto& a = env.obstacles[i];
      const auto& b = env.obstacles[j];
      const bool moving = a.is_moving() || b.is_moving();
      double worst = kInf;
      for (double t : times) {
        worst = std::min(worst, shape_clearance(a.shape_at(t), b.shape_at(t)));
        if (!moving) break;
      }
      if (worst < env.d_min) {
        out.push_back({static_cast<int>(i), static_cast<int>(j), worst,
                       describe_pair(static_cast<int>(i), static_cast<int>(j), worst, env.d_min)});
      }
    }
  }
  return out;
}

Environment make_environment(Environment env) {
  auto violations = validate_environment(env);
  if (!violations.empty()) throw InvalidEnvironment(std::move(violations));
  return env;
}

}  // namespace safeseek
