#include "safeseek/field.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace safeseek {

SourceField SourceField::quadratic(const Mat2& hessian, const Vec2& source) {
  if (std::abs(hessian(0, 1) - hessian(1, 0)) > 1e-12) {
    throw std::invalid_argument("quadratic field: H must be symmetric");
  }
  if (!hessian.allFinite() || !source.allFinite()) {
    throw std::invalid_argument("quadratic field: non-finite entries");
  }
  const Eigen::SelfAdjointEigenSolver<Mat2> eig(hessian);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw std::invalid_argument("quadratic field: H must be positive definite");
  }
  return SourceField(QuadraticField{hessian, source});
}

SourceField SourceField::custom(std::function<FieldSample(const Vec2&)> evaluator,
                                const Vec2& source) {
  if (!evaluator) throw std::invalid_argument("custom field: empty evaluator");
  return SourceField(CustomField{std::move(evaluator), source});
}

FieldSample SourceField::evaluate(const Vec2& position) const {
  if (const auto* q = std::get_if<QuadraticField>(&kind_)) {
    const Vec2 e = position - q->source;
    const Vec2 He = q->hessian * e;
    return {-e.dot(He), -(q->hessian + q->hessian.transpose()) * e};
  }
  return std::get<CustomField>(kind_).evaluator(position);
}

const Vec2& SourceField::source() const {
  return std::visit([](const auto& k) -> const Vec2& { return k.source; }, kind_);
}

double gradient_fd_check(const SourceField& field, const Vec2& position, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("gradient_fd_check: step must be positive");
  const Vec2 analytic = field.evaluate(position).gradient;
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    Vec2 hi = position;
    Vec2 lo = position;
    hi[i] += step;
    lo[i] -= step;
    const double fd = (field.evaluate(hi).value - field.evaluate(lo).value) / (2.0 * step);
    worst = std::max(worst, std::abs(fd - analytic[i]));
  }
  return worst;
}

}  // namespace safeseek
