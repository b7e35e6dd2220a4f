#ifndef SAFESEEK_FIELD_HPP
#define SAFESEEK_FIELD_HPP

#include <functional>
#include <variant>

#include <Eigen/Core>

#include "safeseek/geometry.hpp"

namespace safeseek {

using Mat2 = Eigen::Matrix2d;

struct FieldSample {
  double value = 0.0;
  Vec2 gradient{0.0, 0.0};
};

/// J(p) = -(p - source)^T H (p - source), H symmetric positive definite.
struct QuadraticField {
  Mat2 hessian = Mat2::Identity();
  Vec2 source{0.0, 0.0};
};

struct CustomField {
  std::function<FieldSample(const Vec2&)> evaluator;
  Vec2 source{0.0, 0.0};
};

class SourceField {
 public:
  /// Throws std::invalid_argument unless H is symmetric (1e-12) with positive eigenvalues.
  static SourceField quadratic(const Mat2& hessian, const Vec2& source);
  static SourceField custom(std::function<FieldSample(const Vec2&)> evaluator, const Vec2& source);

  FieldSample evaluate(const Vec2& position) const;
  const Vec2& source() const;

  bool is_quadratic() const { return std::holds_alternative<QuadraticField>(kind_); }
  const QuadraticField* as_quadratic() const { return std::get_if<QuadraticField>(&kind_); }

 private:
  explicit SourceField(std::variant<QuadraticField, CustomField> kind) : kind_(std::move(kind)) {}
  std::variant<QuadraticField, CustomField> kind_;
};

inline FieldSample evaluate(const SourceField& field, const Vec2& position) {
  return field.evaluate(position);
}

/// Max per-component |central difference - analytic gradient| at `position`.
double gradient_fd_check(const SourceField& field, const Vec2& position, double step);

}  // namespace safeseek

#endif  // SAFESEEK_FIELD_HPP
