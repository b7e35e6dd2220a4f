#include "safeseek/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "safeseek/barrier.hpp"
#include "safeseek/safeqp.hpp"
#include "safeseek/scenario.hpp"

namespace safeseek {

namespace {

constexpr double kPi = std::numbers::pi;

double rel_err(double analytic, double fd) {
  return std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-3});
}

struct InteriorSample {
  Shape shape;
  double d_safe = 0.1;
  DFunction d_fn = DFunction::plain_distance(0.3);
  double delta = 0.1;
  ExtendedState state;
};

// Random obstacle and a robot state strictly outside its safety margin.
InteriorSample random_interior(std::mt19937_64& rng, double delta) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * u01(rng); };

  InteriorSample s;
  s.delta = delta;
  if (u01(rng) < 0.5) {
    s.shape = Circle{{uni(-1, 1), uni(-1, 1)}, uni(0.3, 1.5)};
  } else {
    const Vec2 a(uni(-1, 1), uni(-1, 1));
    const double phi = uni(-kPi, kPi);
    s.shape = Segment{a, a + uni(0.5, 3.0) * Vec2(std::cos(phi), std::sin(phi)), uni(0.1, 0.6)};
  }
  const double d_min = 0.8;
  const double d_cons = 0.5 * d_min - s.d_safe;
  s.d_fn = u01(rng) < 0.5 ? DFunction::smooth_bump(uni(0.5, 5.0), d_cons) : DFunction::plain_distance(d_cons);

  const Vec2 probe(uni(-3, 3), uni(-3, 3));
  const ClosestObstacleQuery q = closest_point_on(s.shape, probe);
  const double d_ro = uni(0.02, 1.2);
  const Vec2 p = q.closest_point - (s.d_safe + d_ro) * q.o_ro;
  s.state = ExtendedState::from_pose(p.x(), p.y(), uni(-kPi, kPi), uni(0.1, 3.0));
  return s;
}

ClosestObstacleQuery query_at(const InteriorSample& s, const Vec2& p) {
  ClosestObstacleQuery q = closest_point_on(s.shape, p);
  q.d_ro = q.distance_boundary - s.d_safe;
  q.obstacle_index = 0;
  return q;
}

double h_at(const InteriorSample& s, const Vec2& p, double theta, double v) {
  const ExtendedState st = ExtendedState::from_pose(p.x(), p.y(), theta, v);
  return eval_zcbf(st, query_at(s, p), s.delta, s.d_fn).h;
}

double B_at(const InteriorSample& s, const Vec2& p, double theta, double v) {
  return eval_rcbf(theta, v, query_at(s, p), s.delta, s.d_fn, ClassK{1.0}).B;
}

SuiteResult finish(SuiteResult r) {
  r.passed = r.worst <= r.tolerance;
  std::ostringstream ss;
  ss << "worst " << r.worst << " (tol " << r.tolerance << ") over " << r.cases << " cases";
  if (!r.detail.empty()) ss << "; " << r.detail;
  r.detail = ss.str();
  return r;
}

}  // namespace

SuiteResult verify_lie_derivatives(std::uint64_t seed, std::size_t cases, double tol) {
  std::mt19937_64 rng(seed);
  SuiteResult r{"lie-derivatives-fd", false, 0, 0.0, tol, ""};
  const double eps = 1e-6;
  for (std::size_t i = 0; i < cases; ++i) {
    const InteriorSample s = random_interior(rng, 0.1);
    const ExtendedState& st = s.state;
    const Vec2 p = st.position();
    const Vec2 o = st.heading();
    const ClosestObstacleQuery q = query_at(s, p);

    const BarrierEval e = lie_derivatives(st, q, s.delta, s.d_fn);
    const double lfh = st.v * (h_at(s, p + eps * o, st.theta, st.v) - h_at(s, p - eps * o, st.theta, st.v)) / (2 * eps);
    const double lgh_a = (h_at(s, p, st.theta, st.v + eps) - h_at(s, p, st.theta, st.v - eps)) / (2 * eps);
    const double lgh_w = (h_at(s, p, st.theta + eps, st.v) - h_at(s, p, st.theta - eps, st.v)) / (2 * eps);
    r.worst = std::max({r.worst, rel_err(e.Lfh, lfh), rel_err(e.Lgh.x(), lgh_a), rel_err(e.Lgh.y(), lgh_w)});

    // Reciprocal barrier; P is discontinuous at the heading cut.
    if (std::abs(wrap_angle(st.theta - q.beta)) < kPi - 1e-3) {
      const RcbfEval b = eval_rcbf(st.theta, st.v, q, s.delta, s.d_fn, ClassK{1.0});
      const double lfb = st.v * (B_at(s, p + eps * o, st.theta, st.v) - B_at(s, p - eps * o, st.theta, st.v)) / (2 * eps);
      const double lgb = (B_at(s, p, st.theta + eps, st.v) - B_at(s, p, st.theta - eps, st.v)) / (2 * eps);
      r.worst = std::max({r.worst, rel_err(b.LfB, lfb), rel_err(b.LgB, lgb)});
    }
    ++r.cases;
  }
  return finish(r);
}

SuiteResult verify_d_derivative(std::uint64_t seed, std::size_t cases, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  SuiteResult r{"D-derivative-fd", false, 0, 0.0, tol, ""};
  const double eps = 1e-7;
  for (std::size_t i = 0; i < cases; ++i) {
    const double d_cons = 0.1 + 0.9 * u01(rng);
    const DFunction d = u01(rng) < 0.8 ? DFunction::smooth_bump(0.5 + 4.5 * u01(rng), d_cons)
                                       : DFunction::plain_distance(d_cons);
    const double x = 1e-3 + 2.0 * d_cons * u01(rng);
    if (std::abs(x - d_cons) < 2 * eps) continue;
    const double fd = (d(x + eps).value - d(x - eps).value) / (2 * eps);
    r.worst = std::max(r.worst, rel_err(d(x).slope, fd));
    ++r.cases;
  }
  return finish(r);
}

namespace {

BarrierEval random_eval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> mode(0, 9);
  BarrierEval e;
  e.Lfh = u(rng);
  e.Lgh = Vec2(u(rng), u(rng));
  switch (mode(rng)) {
    case 0: e.Lgh.x() = 0.0; break;
    case 1: e.Lgh.y() = 0.0; break;
    case 2: e.Lgh *= 1e-3; break;
    default: break;
  }
  e.h = std::abs(u(rng));
  e.alpha_h = e.h;
  return e;
}

double inf_norm(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Error scaled by the reference magnitude (floor 1). Near-degenerate instances
// have multipliers around 1e6, where an absolute 1e-9 is below double rounding.
double scaled(double err, double magnitude) { return err / std::max(1.0, std::abs(magnitude)); }

}  // namespace

SuiteResult verify_qp_zcbf(std::uint64_t seed, std::size_t cases, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  SuiteResult r{"qp-zcbf-oracle", false, 0, 0.0, tol, ""};
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    const BarrierEval e = random_eval(rng);
    const Vec2 u_ref(u(rng), u(rng));
    const QpResult got = solve_zcbf_qp(e, u_ref);
    const auto oracle = qp_oracle(QpProblem::projection(u_ref, {{e.Lgh, -(e.Lfh + e.alpha_h)}}));
    ++r.cases;
    if (got.qp_case == QpCase::degenerate) {
      // No input moves the constraint; the oracle must find it infeasible.
      if (oracle) ++mismatched;
      continue;
    }
    if (!oracle) {
      ++mismatched;
      continue;
    }
    r.worst = std::max({r.worst, scaled(inf_norm(got.u_star, oracle->u), oracle->u.cwiseAbs().maxCoeff()),
                        scaled(std::abs(got.lambda_star - oracle->multipliers(0)), oracle->multipliers(0))});
  }
  if (mismatched) r.worst = kInf;
  r.detail = std::to_string(mismatched) + " feasibility mismatches";
  return finish(r);
}

SuiteResult verify_qp_rcbf(std::uint64_t seed, std::size_t cases, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  SuiteResult r{"qp-rcbf-oracle", false, 0, 0.0, tol, ""};
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    RcbfEval e;
    e.LfB = u(rng);
    e.LgB = u(rng);
    e.alpha3_h = std::abs(u(rng));
    const double omega_s = u(rng);
    const ScalarQpResult got = solve_rcbf_qp(e, omega_s);
    Eigen::VectorXd target(1), normal(1);
    target << omega_s;
    normal << -e.LgB;
    const auto oracle = qp_oracle(QpProblem::projection(target, {{normal, e.LfB - e.alpha3_h}}));
    ++r.cases;
    if (!oracle) {
      ++mismatched;
      continue;
    }
    r.worst = std::max({r.worst, std::abs(got.omega_star - oracle->u(0)),
                        std::abs(got.lambda_star - oracle->multipliers(0))});
  }
  if (mismatched) r.worst = kInf;
  r.detail = std::to_string(mismatched) + " feasibility mismatches";
  return finish(r);
}

SuiteResult verify_qp_boxed(std::uint64_t seed, std::size_t cases, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> w(0.1, 4.0);
  SuiteResult r{"qp-boxed-oracle", false, 0, 0.0, tol, ""};
  std::size_t mismatched = 0;
  std::size_t infeasible = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    const BarrierEval e = random_eval(rng);
    const Vec2 u_ref(u(rng), u(rng));
    const double a_lo = u(rng);
    const double w_lo = u(rng);
    const InputBox box{a_lo, a_lo + w(rng), w_lo, w_lo + w(rng)};
    const QpResult got = solve_boxed_qp(e, u_ref, box);
    std::vector<LinearInequality> cons{{e.Lgh, -(e.Lfh + e.alpha_h)},
                                       {Vec2(1, 0), box.a_min},
                                       {Vec2(-1, 0), -box.a_max},
                                       {Vec2(0, 1), box.omega_min},
                                       {Vec2(0, -1), -box.omega_max}};
    const auto oracle = qp_oracle(QpProblem::projection(u_ref, std::move(cons)));
    ++r.cases;
    const bool got_feasible = got.qp_case != QpCase::infeasible && got.qp_case != QpCase::degenerate;
    if (got_feasible != oracle.has_value()) {
      ++mismatched;
      continue;
    }
    if (!oracle) {
      ++infeasible;
      continue;
    }
    r.worst = std::max(r.worst, inf_norm(got.u_star, oracle->u));
  }
  if (mismatched) r.worst = kInf;
  r.detail = std::to_string(mismatched) + " feasibility mismatches, " + std::to_string(infeasible) + " infeasible";
  return finish(r);
}

SuiteResult verify_kkt(std::uint64_t seed, std::size_t cases, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  SuiteResult r{"qp-kkt-certificate", false, 0, 0.0, tol, ""};
  std::size_t failures = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    const BarrierEval e = random_eval(rng);
    const Vec2 u_ref(u(rng), u(rng));
    const QpResult got = solve_zcbf_qp(e, u_ref);
    if (got.qp_case == QpCase::degenerate) continue;
    KktCertificate c = kkt_certificate(e, u_ref, got);
    const double u_scale = std::max(1.0, got.u_star.cwiseAbs().maxCoeff());
    c.stationarity /= u_scale;
    c.complementarity = scaled(c.complementarity, got.lambda_star);
    r.worst = std::max({r.worst, c.stationarity, -c.primal, -c.dual, c.complementarity});
    if (!c.holds(tol)) ++failures;
    ++r.cases;
  }
  r.detail = std::to_string(failures) + " certificates failed";
  return finish(r);
}

SuiteResult verify_relative_degree(std::uint64_t seed, std::size_t cases, double delta) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  SuiteResult r{"relative-degree", false, 0, 0.0, 0.0, ""};
  double min_norm2 = kInf;
  for (std::size_t i = 0; i < cases; ++i) {
    InteriorSample s = random_interior(rng, delta);
    const ClosestObstacleQuery q = query_at(s, s.state.position());
    if (i % 2 == 0) {
      // Heading along +-o_ro, where p'_o = 0 and only delta keeps Lgh nonzero.
      s.state.theta = wrap_angle(q.beta + (u01(rng) < 0.5 ? 0.0 : kPi));
      s.state.resync();
    }
    const BarrierEval e = lie_derivatives(s.state, q, delta, s.d_fn);
    min_norm2 = std::min(min_norm2, e.Lgh.squaredNorm());
    ++r.cases;
  }
  // Pass when min ||Lgh||^2 clears the QP's zero-authority floor.
  r.worst = std::sqrt(min_norm2);
  r.tolerance = std::sqrt(kLghNormSqFloor);
  r.passed = min_norm2 >= kLghNormSqFloor;
  std::ostringstream ss;
  ss << "delta " << delta << ", min ||Lgh|| " << r.worst << " (floor " << r.tolerance << ") over " << r.cases
     << " states";
  r.detail = ss.str();
  return r;
}

DecayCheck barrier_decay(const TrajectoryLog& log, double kappa, double dt, double band_factor) {
  DecayCheck d;
  const auto& rec = log.records;
  for (std::size_t k = 0; k + 1 < rec.size(); ++k) {
    if (!rec[k].active) continue;
    ++d.active_steps;
    const double slack = (rec[k + 1].h - rec[k].h) / dt + kappa * rec[k].h + band_factor * dt;
    d.worst_slack = std::min(d.worst_slack, slack);
    if (slack < 0.0) ++d.violations;
  }
  return d;
}

SuiteResult verify_barrier_decay(double kappa) {
  std::ostringstream name;
  name << "barrier-decay-kappa-" << kappa;
  SuiteResult r{name.str(), false, 0, 0.0, 0.0, ""};
  std::size_t active = 0;
  std::size_t violations = 0;
  double worst = kInf;
  std::ostringstream where;
  auto check = [&](const Scenario& s, const Environment& env, const std::string& tag) {
    SimConfig cfg = s.sim;
    cfg.controller.kappa = kappa;
    const TrajectoryLog log = run(cfg, env, s.field());
    const DecayCheck d = barrier_decay(log, kappa, cfg.dt);
    active += d.active_steps;
    violations += d.violations;
    worst = std::min(worst, d.worst_slack);
    if (d.violations) where << " " << tag << ":" << d.violations;
    ++r.cases;
  };
  for (const std::string n : {"fig2a", "fig2b"}) {
    const Scenario s = builtin_scenario(n);
    check(s, s.env, n);
  }
  const Scenario g = builtin_scenario("gazebo_replica");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    check(g, g.environment_for_seed(seed), "gazebo_replica/seed" + std::to_string(seed));
  }
  r.passed = violations == 0;
  r.worst = worst;
  std::ostringstream ss;
  ss << violations << " violations over " << active << " active steps in " << r.cases << " runs, worst slack "
     << worst;
  if (violations) ss << ";" << where.str();
  r.detail = ss.str();
  return r;
}

std::vector<SuiteResult> run_verify(const VerifyOptions& o) {
  std::vector<SuiteResult> out;
  out.push_back(verify_lie_derivatives(o.seed, o.fd_cases));
  out.push_back(verify_d_derivative(o.seed + 1, o.fd_cases));
  out.push_back(verify_qp_zcbf(o.seed + 2, o.qp_cases));
  out.push_back(verify_qp_rcbf(o.seed + 3, o.qp_cases));
  out.push_back(verify_qp_boxed(o.seed + 4, o.qp_cases));
  out.push_back(verify_kkt(o.seed + 5, o.qp_cases));
  out.push_back(verify_relative_degree(o.seed + 6, o.reldeg_cases, o.force_zero_delta ? 0.0 : 0.1));
  for (double k : o.kappa_sweep) out.push_back(verify_barrier_decay(k));
  return out;
}

}  // namespace safeseek
