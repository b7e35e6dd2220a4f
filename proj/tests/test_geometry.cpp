#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "safeseek/geometry.hpp"

using namespace safeseek;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense sampling of the boundary; an independent distance oracle.
double sampled_distance(const Shape& shape, const Vec2& p) {
  double best = kInf;
  if (const auto* c = std::get_if<Circle>(&shape)) {
    for (int i = 0; i < 20000; ++i) {
      const double t = 2 * kPi * i / 20000.0;
      best = std::min(best, (p - (c->center + c->radius * Vec2(std::cos(t), std::sin(t)))).norm());
    }
    return (p - c->center).norm() < c->radius ? -best : best;
  }
  const auto& s = std::get<Segment>(shape);
  // Capsule: distance to the core segment minus the half width.
  for (int i = 0; i <= 20000; ++i) {
    const Vec2 q = s.a + (s.b - s.a) * (i / 20000.0);
    best = std::min(best, (p - q).norm());
  }
  return best - 0.5 * s.thickness;
}

Environment two_circles() {
  Environment env;
  env.bounds = {{0, 0}, {10, 10}};
  env.obstacles.push_back({Circle{{3, 3}, 1.0}, std::nullopt});
  env.obstacles.push_back({Circle{{7, 7}, 1.0}, std::nullopt});
  return env;
}

}  // namespace

TEST(Geometry, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(wrap_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_angle(-kPi), kPi);
  EXPECT_NEAR(wrap_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(2 * kPi + 0.25), 0.25, 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    EXPECT_NEAR(std::remainder(a - w, 2 * kPi), 0.0, 1e-9);
  }
}

TEST(Geometry, PerpIsCounterClockwise) {
  EXPECT_EQ(perp(Vec2(1, 0)), Vec2(0, 1));
  EXPECT_EQ(perp(Vec2(0, 1)), Vec2(-1, 0));
}

TEST(Geometry, DistanceMatchesBoundarySampling) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-4, 4);
  const Shape shapes[] = {Circle{{0.5, -0.2}, 1.1}, Segment{{-1, -1}, {2, 0.5}, 0.4},
                          Segment{{0, 0}, {0, 0}, 0.6}};
  for (const auto& shape : shapes) {
    for (int i = 0; i < 200; ++i) {
      const Vec2 p(u(rng), u(rng));
      const auto q = closest_point_on(shape, p);
      const double ref = sampled_distance(shape, p);
      if (std::abs(ref) <= 0.05) continue;
      EXPECT_NEAR(q.distance_boundary, ref, 1e-3);
      // Closest point lies at that distance, and o_ro points toward it.
      EXPECT_NEAR((q.closest_point - p).norm(), std::abs(q.distance_boundary), 1e-9);
      EXPECT_NEAR(q.o_ro.norm(), 1.0, 1e-12);
      if (ref > 0) EXPECT_NEAR(((q.closest_point - p).normalized() - q.o_ro).norm(), 0.0, 1e-9);
      EXPECT_NEAR(q.beta, std::atan2(q.o_ro.y(), q.o_ro.x()), 1e-12);
    }
  }
}

TEST(Geometry, FeatureRadiusCurvedAndFlat) {
  const auto c = closest_point_on(Circle{{0, 0}, 1.0}, Vec2(3, 0));
  EXPECT_NEAR(c.feature_radius, 3.0, 1e-12);
  const auto flat = closest_point_on(Segment{{-2, 0}, {2, 0}, 0.2}, Vec2(0.3, 1.0));
  EXPECT_TRUE(std::isinf(flat.feature_radius));
  const auto cap = closest_point_on(Segment{{-2, 0}, {2, 0}, 0.2}, Vec2(3, 1));
  EXPECT_NEAR(cap.feature_radius, std::sqrt(2.0), 1e-12);
}

TEST(Geometry, ClosestObstacleUsesSafetyMargin) {
  Environment env = two_circles();
  env.d_safe = 0.1;
  const auto q = closest_obstacle({5.0, 3.0}, env, 0.0);
  ASSERT_TRUE(q);
  EXPECT_EQ(q->obstacle_index, 0);
  EXPECT_NEAR(q->distance_boundary, 1.0, 1e-12);
  EXPECT_NEAR(q->d_ro, 0.9, 1e-12);
  EXPECT_NEAR(q->beta, kPi, 1e-12);
}

TEST(Geometry, TieGoesToLowestIndex) {
  const auto q = closest_obstacle({5.0, 5.0}, two_circles(), 0.0);
  ASSERT_TRUE(q);
  EXPECT_EQ(q->obstacle_index, 0);
}

TEST(Geometry, PenetrationThrows) {
  const Environment env = two_circles();
  EXPECT_THROW(closest_obstacle({3.0, 3.5}, env, 0.0), PenetrationError);
  EXPECT_THROW(closest_obstacle({4.0, 3.0}, env, 0.0), PenetrationError);  // exactly on the boundary
  try {
    closest_obstacle({7.0, 7.2}, env, 0.0);
    FAIL();
  } catch (const PenetrationError& e) {
    EXPECT_EQ(e.obstacle_index(), 1);
    EXPECT_NEAR(e.distance_boundary(), -0.8, 1e-12);
  }
}

TEST(Geometry, NoObstaclesGivesEmpty) {
  Environment env;
  EXPECT_FALSE(closest_obstacle({1, 1}, env, 0.0));
}

TEST(Geometry, ValidateReportsPairAndDcons) {
  Environment env = two_circles();
  EXPECT_TRUE(validate_environment(env).empty());
  env.obstacles.push_back({Circle{{3, 4.5}, 0.4}, std::nullopt});  // 0.1 from obstacle 0
  const auto v = validate_environment(env);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().first, 0);
  EXPECT_EQ(v.front().second, 2);
  EXPECT_NEAR(v.front().clearance, 0.1, 1e-12);
  EXPECT_THROW(make_environment(env), InvalidEnvironment);

  Environment bad = two_circles();
  bad.d_min = 0.2;  // d_cons = 0.1 - 0.1 = 0
  EXPECT_FALSE(validate_environment(bad).empty());
}

TEST(Geometry, ShapeClearance) {
  EXPECT_NEAR(shape_clearance(Circle{{0, 0}, 1}, Circle{{3, 0}, 1}), 1.0, 1e-12);
  EXPECT_NEAR(shape_clearance(Circle{{0, 0}, 1}, Segment{{-1, 2.5}, {1, 2.5}, 0.2}), 1.4, 1e-12);
  EXPECT_NEAR(shape_clearance(Segment{{0, 0}, {1, 0}, 0.2}, Segment{{0.5, -1}, {0.5, 1}, 0.2}), 0.0, 1e-12);
}

TEST(Geometry, PathLoopTraversal) {
  PathLoop p{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0.5, 0.0};
  EXPECT_DOUBLE_EQ(p.perimeter(), 4.0);
  EXPECT_NEAR((p.point_at(1.5) - Vec2(1, 0.5)).norm(), 0.0, 1e-12);
  EXPECT_NEAR((p.point_at(4.25) - Vec2(0.25, 0)).norm(), 0.0, 1e-12);
  Obstacle o{Circle{{0, 0}, 0.1}, Motion{p}};
  EXPECT_NEAR((o.displacement(4.0) - Vec2(1, 1)).norm(), 0.0, 1e-12);  // 2 m of arc
  const auto moved = std::get<Circle>(o.shape_at(3.0));
  EXPECT_NEAR((moved.center - Vec2(1, 0.5)).norm(), 0.0, 1e-12);
}

TEST(Geometry, ConstantVelocityMotion) {
  Obstacle o{Circle{{1, 1}, 0.2}, Motion{ConstantVelocity{{0.5, -0.25}}}};
  EXPECT_NEAR((o.displacement(2.0) - Vec2(1.0, -0.5)).norm(), 0.0, 1e-12);
  EXPECT_TRUE(o.is_moving());
}
