#ifndef SAFESEEK_SAFEQP_HPP
#define SAFESEEK_SAFEQP_HPP

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "safeseek/barrier.hpp"

namespace safeseek {

// ||Lgh||^2 below this counts as zero.
inline constexpr double kLghNormSqFloor = 1e-12;

enum class QpCase {
  nominal,     // reference input already safe
  projected,   // barrier constraint active
  clipped,     // box active, barrier inactive (boxed variant only)
  degenerate,  // barrier violated but the input has no authority over it
  infeasible,  // boxed variant: half-space and box do not intersect
};

std::string_view to_string(QpCase c);

struct QpResult {
  Vec2 u_star{0.0, 0.0};
  double lambda_star = 0.0;
  QpCase qp_case = QpCase::nominal;
  // Lfh + Lgh u* + alpha(h); >= 0 when the barrier condition holds.
  double constraint_residual = 0.0;
};

/// argmin 1/2 ||u - u_ref||^2  s.t.  Lfh + Lgh u + alpha(h) >= 0, in closed form.
/// Uses eval.alpha_h; eval.H is recomputed for this u_ref.
QpResult solve_zcbf_qp(const BarrierEval& eval, const Vec2& u_ref);

struct ScalarQpResult {
  double omega_star = 0.0;
  double lambda_star = 0.0;
  QpCase qp_case = QpCase::nominal;
  // alpha3(h) - LfB - LgB omega*; >= 0 when the reciprocal condition holds.
  double constraint_residual = 0.0;
};

/// argmin (omega - omega_s)^2  s.t.  LfB + LgB omega - alpha3(h) <= 0.
/// lambda_star is the multiplier of the 1/2-scaled problem.
ScalarQpResult solve_rcbf_qp(const RcbfEval& eval, double omega_s);

struct InputBox {
  double a_min = 0.0;
  double a_max = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;

  bool empty() const { return !(a_min <= a_max) || !(omega_min <= omega_max); }
  Vec2 clip(const Vec2& u) const;
  bool contains(const Vec2& u, double tol = 0.0) const;
};

/// Zeroing-barrier QP restricted to an admissible input box, solved exactly by
/// enumerating which bounds and whether the barrier constraint are active.
/// When the box misses the safe half-space the result is `infeasible` and
/// u_star carries the unboxed safety projection.
QpResult solve_boxed_qp(const BarrierEval& eval, const Vec2& u_ref, const InputBox& box);

// ---------------------------------------------------------------------------
// Generic dense QP by active-set enumeration (test oracle).

/// normal . u >= offset
struct LinearInequality {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

/// minimize 1/2 u^T Q u + c^T u  subject to every inequality.
struct QpProblem {
  Eigen::MatrixXd Q;
  Eigen::VectorXd c;
  std::vector<LinearInequality> constraints;

  /// 1/2 ||u - target||^2 with the given constraints.
  static QpProblem projection(const Eigen::VectorXd& target, std::vector<LinearInequality> cons);
};

struct OracleSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd multipliers;  // one per constraint, zero when inactive
};

/// Tries every subset of constraints as the active set, keeping the KKT point
/// with the lowest cost. Empty when the feasible set is empty. Q must be
/// positive definite; at most 16 constraints.
std::optional<OracleSolution> qp_oracle(const QpProblem& problem);

struct KktCertificate {
  double stationarity = 0.0;  // ||u* - u_ref - lambda Lgh||_inf
  double primal = 0.0;        // constraint residual
  double dual = 0.0;          // lambda
  double complementarity = 0.0;  // |lambda * residual|

  bool holds(double tol) const {
    return stationarity <= tol && primal >= -tol && dual >= 0.0 && complementarity <= tol;
  }
};

KktCertificate kkt_certificate(const BarrierEval& eval, const Vec2& u_ref, const QpResult& result);

}  // namespace safeseek

#endif  // SAFESEEK_SAFEQP_HPP
