#include "safeseek/seek.hpp"

#include <cmath>
#include <stdexcept>

namespace safeseek {

void SeekGains::validate() const {
  if (!(k1 > 0.0) || !(k2 > 0.0)) {
    throw std::invalid_argument("seek gains: k1 and k2 must be positive");
  }
}

SeekReference seek_reference(double theta, const Vec2& gradient, const SeekGains& gains) {
  const Vec2 heading(std::cos(theta), std::sin(theta));
  Vec2 turn = perp(gradient);
  if (gains.normalize_perp) {
    const double n = gradient.norm();
    turn = n > 0.0 ? Vec2(turn / n) : Vec2::Zero();
  }
  return {gains.k1 * heading.dot(gradient), -gains.k2 * heading.dot(turn)};
}

double ReferenceAccelerator::push(double time, double v_s) {
  if (prev_time_ && !(time > *prev_time_)) {
    throw std::invalid_argument("reference acceleration: timestamps must strictly increase");
  }
  last_a_ = prev_time_ ? (v_s - prev_v_) / (time - *prev_time_) : 0.0;
  prev_time_ = time;
  prev_v_ = v_s;
  return last_a_;
}

void ReferenceAccelerator::reset() {
  prev_time_.reset();
  prev_v_ = 0.0;
  last_a_ = 0.0;
}

}  // namespace safeseek
