#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "safeseek/field.hpp"
#include "safeseek/seek.hpp"

using namespace safeseek;

TEST(Field, QuadraticValueAndGradient) {
  Mat2 h;
  h << 5, 4, 4, 5;
  const auto f = SourceField::quadratic(h, {1, -2});
  const auto s = f.evaluate({2, -1});
  EXPECT_DOUBLE_EQ(s.value, -(5 + 8 + 5));
  EXPECT_DOUBLE_EQ(s.gradient.x(), -18);
  EXPECT_DOUBLE_EQ(s.gradient.y(), -18);
  EXPECT_EQ(f.source(), Vec2(1, -2));
}

TEST(Field, GradientAgainstCentralDifference) {
  Mat2 h;
  h << 5, 4, 4, 5;
  const auto f = SourceField::quadratic(h, {0.3, 0.7});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p(u(rng), u(rng));
    const auto s = f.evaluate(p);
    const double gx = oracle::central_diff([&](double x) { return f.evaluate({x, p.y()}).value; }, p.x(), 1e-4);
    const double gy = oracle::central_diff([&](double y) { return f.evaluate({p.x(), y}).value; }, p.y(), 1e-4);
    EXPECT_NEAR(s.gradient.x(), gx, 1e-6 * (1 + std::abs(gx)));
    EXPECT_NEAR(s.gradient.y(), gy, 1e-6 * (1 + std::abs(gy)));
  }
  EXPECT_LT(gradient_fd_check(f, {3, -4}, 1e-5), 1e-5);
}

TEST(Field, RejectsBadHessian) {
  Mat2 asym;
  asym << 1, 0.5, 0, 1;
  EXPECT_THROW(SourceField::quadratic(asym, {0, 0}), std::invalid_argument);
  Mat2 indef;
  indef << 1, 2, 2, 1;
  EXPECT_THROW(SourceField::quadratic(indef, {0, 0}), std::invalid_argument);
}

TEST(Field, CustomEvaluator) {
  const auto f = SourceField::custom([](const Vec2& p) { return FieldSample{-p.squaredNorm(), -2 * p}; }, {0, 0});
  EXPECT_FALSE(f.is_quadratic());
  EXPECT_DOUBLE_EQ(f.evaluate({1, 2}).value, -5);
}

TEST(Seek, RawLaw) {
  const SeekGains g{2.0, 3.0, false};
  const Vec2 grad(1.0, -2.0);
  const double th = 0.4;
  const auto r = seek_reference(th, grad, g);
  const Vec2 o(std::cos(th), std::sin(th));
  EXPECT_NEAR(r.v_s, 2.0 * o.dot(grad), 1e-15);
  EXPECT_NEAR(r.omega_s, -3.0 * o.dot(Vec2(2.0, 1.0)), 1e-15);
}

TEST(Seek, TurnsTowardTheGradient) {
  // Facing +x with the source up and to the left: should turn counter-clockwise.
  const auto r = seek_reference(0.0, Vec2(-1.0, 1.0), SeekGains{1, 1, false});
  EXPECT_GT(r.omega_s, 0.0);
  EXPECT_LT(r.v_s, 0.0);
}

TEST(Seek, NormalizedPerpUsesUnitGradient) {
  const SeekGains g{1.0, 5.0, true};
  const auto a = seek_reference(0.3, Vec2(10.0, 20.0), g);
  const auto b = seek_reference(0.3, Vec2(0.1, 0.2), g);
  EXPECT_NEAR(a.omega_s, b.omega_s, 1e-12);
  EXPECT_NEAR(a.v_s, 100.0 * b.v_s, 1e-9);
  const auto z = seek_reference(0.3, Vec2(0.0, 0.0), g);
  EXPECT_EQ(z.omega_s, 0.0);
}

TEST(Seek, GainsValidated) {
  EXPECT_THROW((SeekGains{0.0, 1.0, false}.validate()), std::invalid_argument);
  EXPECT_THROW((SeekGains{1.0, -1.0, false}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((SeekGains{1.0, 1.0, false}.validate()));
}

TEST(Seek, BackwardDifference) {
  ReferenceAccelerator acc;
  EXPECT_EQ(acc.push(0.0, 1.0), 0.0);
  EXPECT_NEAR(acc.push(0.01, 1.02), 2.0, 1e-12);
  EXPECT_NEAR(acc.push(0.03, 1.00), -1.0, 1e-12);
  EXPECT_THROW(acc.push(0.03, 1.0), std::invalid_argument);
  acc.reset();
  EXPECT_EQ(acc.push(5.0, 3.0), 0.0);
}
