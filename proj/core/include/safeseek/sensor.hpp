#ifndef SAFESEEK_SENSOR_HPP
#define SAFESEEK_SENSOR_HPP

#include <optional>

#include "safeseek/field.hpp"
#include "safeseek/geometry.hpp"

namespace safeseek {

/// Everything the controller is allowed to see at one instant.
struct SensorReading {
  // Empty when no obstacle boundary lies within max_range.
  std::optional<ClosestObstacleQuery> obstacle;
  double field_value = 0.0;
  Vec2 gradient{0.0, 0.0};

  bool obstacle_in_range() const { return obstacle.has_value(); }
};

/// Idealized range-limited sensor. Propagates PenetrationError.
SensorReading sensor_read(const Vec2& position, const Environment& env, const SourceField& field,
                          double time, double max_range = kInf);

}  // namespace safeseek

#endif  // SAFESEEK_SENSOR_HPP
