#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fd_oracle.hpp"
#include "oracles.hpp"
#include "safeseek/barrier.hpp"

using namespace safeseek;

namespace {

constexpr double kPi = std::numbers::pi;

using oracle::B_of;
using oracle::bump;
using oracle::h_of;
using oracle::mixed_env;
using oracle::Pose;
using oracle::rel_err;

}  // namespace

TEST(DFunction, SmoothBumpShape) {
  const auto d = DFunction::smooth_bump(2.0, 0.3);
  EXPECT_NEAR(d(0.0).value, 0.0, 1e-15);
  EXPECT_NEAR(d(0.3).value, std::exp(-1.0 / 0.6), 1e-15);
  EXPECT_NEAR(d(5.0).value, d.plateau(), 0.0);
  EXPECT_EQ(d(5.0).slope, 0.0);
  EXPECT_LT(d(-0.05).value, 0.0);
  double prev = -kInf;
  for (double x = -0.1; x < 0.5; x += 0.001) {
    EXPECT_GE(d(x).value, prev);
    prev = d(x).value;
    EXPECT_NEAR(d(x).value, bump(x, 2.0, 0.3), 1e-14);
  }
}

TEST(DFunction, SlopeAgainstCentralDifference) {
  for (const double gamma : {0.5, 1.0, 2.0}) {
    const auto d = DFunction::smooth_bump(gamma, 0.3);
    for (double x = -0.05; x < 0.29; x += 0.0071) {
      const double fd = oracle::central_diff([&](double z) { return bump(z, gamma, 0.3); }, x, 1e-7);
      EXPECT_LT(rel_err(d(x).slope, fd), 1e-6) << "gamma " << gamma << " d " << x;
    }
  }
  const auto p = DFunction::plain_distance(0.3);
  EXPECT_EQ(p(0.7).value, 0.7);
  EXPECT_EQ(p(0.7).slope, 1.0);
}

TEST(ExtendedStateTest, ManifoldRoundTrip) {
  const auto s = ExtendedState::from_extended(0, 0, 0.5, std::sqrt(2.0) / 4, std::sqrt(2.0) / 4);
  EXPECT_NEAR(s.theta, kPi / 4, 1e-15);
  EXPECT_TRUE(s.on_manifold());
  auto t = ExtendedState::from_pose(1, 2, 0.3, 0.7);
  t.xdot += 1e-3;
  EXPECT_FALSE(t.on_manifold());
  t.resync();
  EXPECT_TRUE(t.on_manifold());
}

TEST(Zcbf, ValueMatchesIndependentFormula) {
  const Environment env = mixed_env();
  const auto dfn = DFunction::smooth_bump(2.0, env.d_cons());
  const Pose s{-1.25, 0.3, 0.2, 0.4};
  const auto q = closest_obstacle({s.x, s.y}, env, 0.0);
  const auto z = eval_zcbf(ExtendedState::from_pose(s.x, s.y, s.theta, s.v), *q, 0.1, dfn);
  EXPECT_NEAR(z.h, h_of(s, env, 0.1, 2.0), 1e-14);
  EXPECT_THROW(eval_zcbf(ExtendedState::from_pose(s.x, s.y, s.theta, 0.0), *q, 0.1, dfn), BarrierDomainError);
}

TEST(Zcbf, LieDerivativesAgainstFiniteDifferences) {
  const Environment env = mixed_env();
  const double delta = 0.1, gamma = 2.0, eps = 1e-6;
  const auto dfn = DFunction::smooth_bump(gamma, env.d_cons());
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ang(-kPi, kPi), dist(0.12, 0.45), speed(0.05, 2.0), pick(0, 1);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    // Place the robot inside the ramp band of a random obstacle.
    Vec2 p;
    if (pick(rng) < 0.5) {
      const double a = ang(rng);
      p = (1.0 + dist(rng)) * Vec2(std::cos(a), std::sin(a));
    } else {
      p = Vec2(4.0 - 0.15 - dist(rng), 6.0 * (pick(rng) - 0.5));
    }
    const Pose s{p.x(), p.y(), ang(rng), speed(rng)};
    const auto q = closest_obstacle(p, env, 0.0);
    const auto e = lie_derivatives(ExtendedState::from_pose(s.x, s.y, s.theta, s.v), *q, delta, dfn);
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    const double lf = oracle::central_diff(
        [&](double t) { return h_of({s.x + t * s.v * c, s.y + t * s.v * sn, s.theta, s.v}, env, delta, gamma); },
        0.0, eps);
    const double la = oracle::central_diff(
        [&](double t) { return h_of({s.x, s.y, s.theta, s.v + t}, env, delta, gamma); }, 0.0, eps);
    const double lw = oracle::central_diff(
        [&](double t) { return h_of({s.x, s.y, s.theta + t, s.v}, env, delta, gamma); }, 0.0, eps);
    EXPECT_LT(rel_err(e.Lfh, lf), 1e-5) << i;
    EXPECT_LT(rel_err(e.Lgh.x(), la), 1e-5) << i;
    EXPECT_LT(rel_err(e.Lgh.y(), lw), 1e-5) << i;
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Zcbf, WithReferenceFillsH) {
  BarrierEval e;
  e.h = 0.2;
  e.Lfh = -0.5;
  e.Lgh = Vec2(-0.1, 0.3);
  const auto r = with_reference(e, Vec2(1.0, -2.0), ClassK{3.0});
  EXPECT_NEAR(r.alpha_h, 0.6, 1e-15);
  EXPECT_NEAR(r.H, -0.5 - 0.1 - 0.6 + 0.6, 1e-15);
  EXPECT_TRUE(r.active);
}

TEST(Zcbf, OutOfRangeIsInactive) {
  const auto dfn = DFunction::smooth_bump(2.0, 0.3);
  const auto e = out_of_range_barrier(dfn, Vec2(5.0, -7.0), ClassK{1.0});
  EXPECT_EQ(e.Lgh, Vec2(0, 0));
  EXPECT_GT(e.H, 0.0);
  EXPECT_FALSE(e.active);
}

TEST(Rcbf, DerivativesAgainstFiniteDifferences) {
  const Environment env = mixed_env();
  const double delta = 0.1, gamma = 2.0, eps = 1e-6;
  const auto dfn = DFunction::smooth_bump(gamma, env.d_cons());
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(-kPi, kPi), dist(0.12, 0.45), speed(-1.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = ang(rng);
    const Vec2 p = (1.0 + dist(rng)) * Vec2(std::cos(a), std::sin(a));
    const Pose s{p.x(), p.y(), ang(rng), speed(rng)};
    const auto q = closest_obstacle(p, env, 0.0);
    // Skip the heading cut where wrap() jumps.
    if (std::abs(std::abs(wrap_angle(s.theta - q->beta)) - kPi) < 1e-3) continue;
    const auto r = eval_rcbf(s.theta, s.v, *q, delta, dfn, ClassK{5.0});
    const double c = std::cos(s.theta), sn = std::sin(s.theta);
    const double lf = oracle::central_diff(
        [&](double t) { return B_of({s.x + t * s.v * c, s.y + t * s.v * sn, s.theta, s.v}, env, delta, gamma); },
        0.0, eps);
    const double lg = oracle::central_diff(
        [&](double t) { return B_of({s.x, s.y, s.theta + t, s.v}, env, delta, gamma); }, 0.0, eps);
    EXPECT_NEAR(r.B, B_of(s, env, delta, gamma), 1e-12 * r.B);
    EXPECT_NEAR(r.h, 1.0 / r.B, 1e-12);
    EXPECT_LT(rel_err(r.LfB, lf), 1e-5) << i;
    EXPECT_LT(rel_err(r.LgB, lg), 1e-5) << i;
  }
}

TEST(Rcbf, UndefinedInsideMargin) {
  ClosestObstacleQuery q;
  q.d_ro = -0.01;
  q.distance_boundary = 0.09;
  EXPECT_THROW(eval_rcbf(0.0, 1.0, q, 0.1, DFunction::smooth_bump(2.0, 0.3), ClassK{1.0}), BarrierDomainError);
}
