#include "safeseek/safeqp.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>

namespace safeseek {

std::string_view to_string(QpCase c) {
  switch (c) {
    case QpCase::nominal: return "nominal";
    case QpCase::projected: return "projected";
    case QpCase::clipped: return "clipped";
    case QpCase::degenerate: return "degenerate";
    case QpCase::infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

void require_finite(const BarrierEval& e, const Vec2& u_ref) {
  if (!std::isfinite(e.Lfh) || !e.Lgh.allFinite() || !std::isfinite(e.alpha_h) ||
      !u_ref.allFinite()) {
    throw std::invalid_argument("safety QP: non-finite input");
  }
}

double residual(const BarrierEval& e, const Vec2& u) { return e.Lfh + e.Lgh.dot(u) + e.alpha_h; }

}  // namespace

QpResult solve_zcbf_qp(const BarrierEval& eval, const Vec2& u_ref) {
  require_finite(eval, u_ref);
  const double H = residual(eval, u_ref);
  const double norm2 = eval.Lgh.squaredNorm();

  QpResult r;
  r.u_star = u_ref;
  if (H >= 0.0) {
    r.qp_case = QpCase::nominal;
  } else if (norm2 < kLghNormSqFloor) {
    r.qp_case = QpCase::degenerate;
  } else {
    r.lambda_star = -H / norm2;
    r.u_star = u_ref + r.lambda_star * eval.Lgh;
    r.qp_case = QpCase::projected;
  }
  r.constraint_residual = residual(eval, r.u_star);
  return r;
}

ScalarQpResult solve_rcbf_qp(const RcbfEval& eval, double omega_s) {
  if (!std::isfinite(eval.LfB) || !std::isfinite(eval.LgB) || !std::isfinite(eval.alpha3_h) ||
      !std::isfinite(omega_s)) {
    throw std::invalid_argument("reciprocal QP: non-finite input");
  }
  auto slack = [&](double omega) { return eval.alpha3_h - eval.LfB - eval.LgB * omega; };

  ScalarQpResult r;
  r.omega_star = omega_s;
  if (slack(omega_s) >= 0.0) {
    r.qp_case = QpCase::nominal;
  } else if (eval.LgB * eval.LgB < kLghNormSqFloor) {
    r.qp_case = QpCase::degenerate;
  } else {
    r.omega_star = (eval.alpha3_h - eval.LfB) / eval.LgB;
    r.lambda_star = (omega_s - r.omega_star) / eval.LgB;
    r.qp_case = QpCase::projected;
  }
  r.constraint_residual = slack(r.omega_star);
  return r;
}

Vec2 InputBox::clip(const Vec2& u) const {
  return {std::clamp(u.x(), a_min, a_max), std::clamp(u.y(), omega_min, omega_max)};
}

bool InputBox::contains(const Vec2& u, double tol) const {
  return u.x() >= a_min - tol && u.x() <= a_max + tol && u.y() >= omega_min - tol &&
         u.y() <= omega_max + tol;
}

QpResult solve_boxed_qp(const BarrierEval& eval, const Vec2& u_ref, const InputBox& box) {
  require_finite(eval, u_ref);
  if (box.empty()) throw std::invalid_argument("boxed QP: empty input box");

  const Vec2 g = eval.Lgh;
  const double b = -(eval.Lfh + eval.alpha_h);  // g . u >= b
  const double scale = 1.0 + u_ref.cwiseAbs().maxCoeff() + std::abs(b) +
                       std::abs(box.a_min) + std::abs(box.a_max) + std::abs(box.omega_min) +
                       std::abs(box.omega_max);
  const double tol = 1e-12 * scale;

  if (g.squaredNorm() < kLghNormSqFloor) {
    QpResult r;
    r.u_star = box.clip(u_ref);
    if (b > 0.0) {
      r.qp_case = QpCase::degenerate;
    } else {
      r.qp_case = r.u_star == u_ref ? QpCase::nominal : QpCase::clipped;
    }
    r.constraint_residual = residual(eval, r.u_star);
    return r;
  }

  // Per coordinate: 0 free, 1 at lower bound, 2 at upper bound.
  const std::array<std::array<double, 2>, 2> bounds{
      {{box.a_min, box.a_max}, {box.omega_min, box.omega_max}}};
  std::optional<QpResult> best;
  double best_cost = std::numeric_limits<double>::infinity();

  for (int pattern_a = 0; pattern_a < 3; ++pattern_a) {
    for (int pattern_w = 0; pattern_w < 3; ++pattern_w) {
      const std::array<int, 2> pattern{pattern_a, pattern_w};
      for (int barrier_on = 0; barrier_on < 2; ++barrier_on) {
        Vec2 u = u_ref;
        for (int i = 0; i < 2; ++i) {
          if (pattern[i] != 0) u[i] = bounds[i][pattern[i] - 1];
        }
        double lambda = 0.0;
        if (barrier_on) {
          double free_norm2 = 0.0;
          double fixed_part = 0.0;
          for (int i = 0; i < 2; ++i) {
            if (pattern[i] == 0) {
              free_norm2 += g[i] * g[i];
            } else {
              fixed_part += g[i] * u[i];
            }
          }
          if (free_norm2 < kLghNormSqFloor) continue;
          double free_ref = 0.0;
          for (int i = 0; i < 2; ++i) {
            if (pattern[i] == 0) free_ref += g[i] * u_ref[i];
          }
          lambda = (b - fixed_part - free_ref) / free_norm2;
          if (lambda < 0.0) continue;
          for (int i = 0; i < 2; ++i) {
            if (pattern[i] == 0) u[i] = u_ref[i] + lambda * g[i];
          }
        }
        if (!box.contains(u, tol) || g.dot(u) < b - tol) continue;
        const double cost = 0.5 * (u - u_ref).squaredNorm();
        if (cost < best_cost) {
          best_cost = cost;
          QpResult r;
          r.u_star = u;
          r.lambda_star = lambda;
          if (barrier_on) {
            r.qp_case = QpCase::projected;
          } else {
            r.qp_case = (pattern_a == 0 && pattern_w == 0) ? QpCase::nominal : QpCase::clipped;
          }
          best = r;
        }
      }
    }
  }

  if (!best) {
    QpResult r = solve_zcbf_qp(eval, u_ref);
    r.qp_case = QpCase::infeasible;
    return r;
  }
  best->constraint_residual = residual(eval, best->u_star);
  return *best;
}

QpProblem QpProblem::projection(const Eigen::VectorXd& target, std::vector<LinearInequality> cons) {
  QpProblem p;
  p.Q = Eigen::MatrixXd::Identity(target.size(), target.size());
  p.c = -target;
  p.constraints = std::move(cons);
  return p;
}

std::optional<OracleSolution> qp_oracle(const QpProblem& problem) {
  const auto n = problem.Q.rows();
  const auto m = static_cast<int>(problem.constraints.size());
  if (m > 16) throw std::invalid_argument("qp_oracle: at most 16 constraints");

  std::optional<OracleSolution> best;
  double best_cost = std::numeric_limits<double>::infinity();
  const double tol = 1e-10;

  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    const int k = std::popcount(mask);
    if (k > n) continue;
    std::vector<int> active;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) active.push_back(i);
    }
    // [Q  -A^T] [u]     [-c]
    // [A   0  ] [mu]  = [ b]
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
    Eigen::VectorXd rhs(n + k);
    kkt.topLeftCorner(n, n) = problem.Q;
    rhs.head(n) = -problem.c;
    for (int j = 0; j < k; ++j) {
      const auto& con = problem.constraints[active[j]];
      kkt.block(0, n + j, n, 1) = -con.normal;
      kkt.block(n + j, 0, 1, n) = con.normal.transpose();
      rhs(n + j) = con.offset;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd u = sol.head(n);

    bool ok = true;
    for (int j = 0; j < k && ok; ++j) ok = sol(n + j) >= -tol;
    for (int i = 0; i < m && ok; ++i) {
      const auto& con = problem.constraints[i];
      ok = con.normal.dot(u) >= con.offset - tol * (1.0 + std::abs(con.offset));
    }
    if (!ok) continue;

    const double cost = 0.5 * u.dot(problem.Q * u) + problem.c.dot(u);
    if (cost < best_cost) {
      best_cost = cost;
      OracleSolution s;
      s.u = u;
      s.multipliers = Eigen::VectorXd::Zero(m);
      for (int j = 0; j < k; ++j) s.multipliers(active[j]) = std::max(0.0, sol(n + j));
      best = std::move(s);
    }
  }
  return best;
}

KktCertificate kkt_certificate(const BarrierEval& eval, const Vec2& u_ref, const QpResult& result) {
  KktCertificate c;
  c.stationarity = (result.u_star - u_ref - result.lambda_star * eval.Lgh).cwiseAbs().maxCoeff();
  c.primal = residual(eval, result.u_star);
  c.dual = result.lambda_star;
  c.complementarity = std::abs(result.lambda_star * c.primal);
  return c;
}

}  // namespace safeseek
