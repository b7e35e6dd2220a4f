#ifndef SAFESEEK_SEEK_HPP
#define SAFESEEK_SEEK_HPP

#include <optional>

#include "safeseek/geometry.hpp"

namespace safeseek {

struct SeekGains {
  double k1 = 1.0;
  double k2 = 5.0;
  // Rotate the unit gradient instead of the raw gradient for the turning term.
  bool normalize_perp = false;

  /// Throws std::invalid_argument unless k1 > 0 and k2 > 0.
  void validate() const;
};

struct SeekReference {
  double v_s = 0.0;
  double omega_s = 0.0;
};

/// Gradient-ascent unicycle law:
///   v_s     =  k1 <(cos th, sin th), grad J>
///   omega_s = -k2 <(cos th, sin th), perp(grad J)>
SeekReference seek_reference(double theta, const Vec2& gradient, const SeekGains& gains);

/// Backward difference of the v_s stream. Holds the last two samples; one
/// instance per robot.
class ReferenceAccelerator {
 public:
  /// Records (time, v_s) and returns a_s. The first sample yields 0.
  /// Throws std::invalid_argument on non-increasing timestamps.
  double push(double time, double v_s);
  double last() const { return last_a_; }
  void reset();

 private:
  std::optional<double> prev_time_;
  double prev_v_ = 0.0;
  double last_a_ = 0.0;
};

}  // namespace safeseek

#endif  // SAFESEEK_SEEK_HPP
