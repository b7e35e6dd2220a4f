#include "safeseek/sensor.hpp"

namespace safeseek {

SensorReading sensor_read(const Vec2& position, const Environment& env, const SourceField& field,
                          double time, double max_range) {
  SensorReading reading;
  auto nearest = closest_obstacle(position, env, time);
  if (nearest && nearest->distance_boundary <= max_range) reading.obstacle = *nearest;
  const FieldSample sample = field.evaluate(position);
  reading.field_value = sample.value;
  reading.gradient = sample.gradient;
  return reading;
}

}  // namespace safeseek
