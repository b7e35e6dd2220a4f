// Independent reference computations used by the tests. Nothing here calls the
// library's own solvers or derivative code.
#ifndef SAFESEEK_TESTS_ORACLES_HPP
#define SAFESEEK_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using Vec2 = Eigen::Vector2d;

inline double central_diff(const std::function<double(double)>& f, double x, double eps) {
  return (f(x + eps) - f(x - eps)) / (2.0 * eps);
}

// a . u >= b
struct HalfPlane {
  Vec2 a;
  double b;
  bool holds(const Vec2& u, double tol) const { return a.dot(u) >= b - tol; }
};

struct Box {
  double lo0, hi0, lo1, hi1;
  bool holds(const Vec2& u, double tol) const {
    return u.x() >= lo0 - tol && u.x() <= hi0 + tol && u.y() >= lo1 - tol && u.y() <= hi1 + tol;
  }
};

// Projection of `target` onto {a.u >= b} intersected with an optional box.
// Candidates are every point where some subset of constraints can be tight:
// the target, its projection onto each line, vertices and line crossings.
// The closest feasible candidate is the minimizer because the problem is a
// strictly convex projection in the plane.
inline std::optional<Vec2> brute_project(const Vec2& target, const std::optional<HalfPlane>& hp,
                                         const std::optional<Box>& box, double tol = 1e-10) {
  struct Line {
    Vec2 n;
    double c;  // n.u = c
  };
  std::vector<Line> lines;
  if (hp && hp->a.squaredNorm() > 0.0) lines.push_back({hp->a, hp->b});
  if (box) {
    lines.push_back({{1, 0}, box->lo0});
    lines.push_back({{1, 0}, box->hi0});
    lines.push_back({{0, 1}, box->lo1});
    lines.push_back({{0, 1}, box->hi1});
  }
  std::vector<Vec2> cands{target};
  for (const auto& l : lines) {
    cands.push_back(target + (l.c - l.n.dot(target)) / l.n.squaredNorm() * l.n);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      // Cramer's rule for the crossing of two lines.
      const Vec2& n1 = lines[i].n;
      const Vec2& n2 = lines[j].n;
      const double det = n1.x() * n2.y() - n1.y() * n2.x();
      if (std::abs(det) < 1e-14) continue;
      cands.emplace_back((lines[i].c * n2.y() - n1.y() * lines[j].c) / det,
                         (n1.x() * lines[j].c - lines[i].c * n2.x()) / det);
    }
  }
  std::optional<Vec2> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : cands) {
    if (hp && !hp->holds(c, tol)) continue;
    if (box && !box->holds(c, tol)) continue;
    const double d = (c - target).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

// Coarse-to-fine grid search of a scalar projection min (w - w0)^2 s.t. g(w) <= 0.
inline std::optional<double> grid_project_scalar(double w0, const std::function<bool(double)>& feasible,
                                                 double span, int levels = 6, int n = 2001) {
  double lo = w0 - span, hi = w0 + span;
  std::optional<double> best;
  for (int level = 0; level < levels; ++level) {
    const double step = (hi - lo) / (n - 1);
    std::optional<double> lvl;
    for (int i = 0; i < n; ++i) {
      const double w = lo + step * i;
      if (!feasible(w)) continue;
      if (!lvl || std::abs(w - w0) < std::abs(*lvl - w0)) lvl = w;
    }
    if (!lvl) return best;
    best = lvl;
    lo = *lvl - 2 * step;
    hi = *lvl + 2 * step;
  }
  return best;
}

}  // namespace oracle

#endif
