#include "safeseek/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace safeseek {

void McConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("monte carlo: " + msg); };
  if (runs < 1) fail("runs must be >= 1");
  if (obstacle_count < 0) fail("obstacle_count must be >= 0");
  if (obstacle_count > 0 && radius_set.empty()) fail("radius_set is empty");
  for (double r : radius_set) {
    if (!(r > 0.0)) fail("radii must be positive");
  }
  if (!(workspace.min.x() < workspace.max.x()) || !(workspace.min.y() < workspace.max.y())) {
    fail("workspace is empty");
  }
  if (!(d_safe > 0.0) || !(0.5 * d_min - d_safe > 0.0)) fail("need d_safe > 0 and d_min/2 > d_safe");
  if (!(initial_speed > 0.0)) fail("initial_speed must be positive");
  if (max_attempts < 1) fail("max_attempts must be >= 1");
  if (threads < 0) fail("threads must be >= 0");
  if (variants.empty()) fail("no controller variants");
  for (std::size_t i = 0; i < variants.size(); ++i) {
    if (variants[i].name.empty()) fail("variant name is empty");
    for (std::size_t j = 0; j < i; ++j) {
      if (variants[i].name == variants[j].name) fail("duplicate variant " + variants[i].name);
    }
    variants[i].controller.gains.validate();
  }
  (void)SourceField::quadratic(hessian, source);
}

std::optional<double> metric_Tc(const TrajectoryLog& log, const Vec2& source) {
  if (log.records.empty()) throw std::invalid_argument("metric_Tc: empty log");
  const auto& first = log.records.front();
  const double goal = 0.2 * (Vec2(first.x, first.y) - source).norm();
  for (const auto& r : log.records) {
    if ((Vec2(r.x, r.y) - source).norm() <= goal) return r.time;
  }
  return std::nullopt;
}

double metric_Dobs(const TrajectoryLog& log) {
  if (log.records.empty()) throw std::invalid_argument("metric_Dobs: empty log");
  double d = kInf;
  for (const auto& r : log.records) d = std::min(d, r.distance_boundary);
  return d;
}

double quantile_type7(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> samples) {
  BoxStats b;
  b.count = samples.size();
  if (samples.empty()) return b;
  std::sort(samples.begin(), samples.end());
  b.q1 = quantile_type7(samples, 0.25);
  b.median = quantile_type7(samples, 0.5);
  b.q3 = quantile_type7(samples, 0.75);
  const double iqr = b.q3 - b.q1;
  const double lo_fence = b.q1 - 1.5 * iqr;
  const double hi_fence = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double x : samples) {
    if (x < lo_fence || x > hi_fence) {
      b.outliers.push_back(x);
    } else {
      b.whisker_low = std::min(b.whisker_low, x);
      b.whisker_high = std::max(b.whisker_high, x);
    }
  }
  return b;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Fnv1a {
 public:
  void add(double x) {
    // -0.0 and 0.0 hash alike.
    if (x == 0.0) x = 0.0;
    const auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) {
      h_ ^= (bits >> (8 * i)) & 0xffU;
      h_ *= 0x100000001b3ULL;
    }
  }
  void add(const Vec2& v) {
    add(v.x());
    add(v.y());
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::uint64_t trial_hash(const Environment& env, const ExtendedState& initial) {
  Fnv1a h;
  h.add(env.d_safe);
  h.add(env.d_min);
  for (const auto& o : env.obstacles) {
    if (const auto* c = std::get_if<Circle>(&o.shape)) {
      h.add(0.0);
      h.add(c->center);
      h.add(c->radius);
    } else {
      const auto& s = std::get<Segment>(o.shape);
      h.add(1.0);
      h.add(s.a);
      h.add(s.b);
      h.add(s.thickness);
    }
  }
  h.add(initial.x);
  h.add(initial.y);
  h.add(initial.theta);
  h.add(initial.v);
  return h.value();
}

McTrial make_trial(const McConfig& config, int run) {
  McTrial trial;
  trial.run = run;
  trial.seed = splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(run)));
  std::mt19937_64 rng(trial.seed);
  std::uniform_real_distribution<double> ux(config.workspace.min.x(), config.workspace.max.x());
  std::uniform_real_distribution<double> uy(config.workspace.min.y(), config.workspace.max.y());
  std::uniform_int_distribution<std::size_t> pick(0, config.radius_set.empty() ? 0 : config.radius_set.size() - 1);

  Environment& env = trial.env;
  env.bounds = config.workspace;
  env.d_safe = config.d_safe;
  env.d_min = config.d_min;
  const double d_cons = env.d_cons();

  for (int i = 0; i < config.obstacle_count; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < config.max_attempts && !placed; ++attempt) {
      const Circle c{Vec2(ux(rng), uy(rng)), config.radius_set[pick(rng)]};
      if ((c.center - config.source).norm() - c.radius - env.d_safe < d_cons) continue;
      bool clear = true;
      for (const auto& o : env.obstacles) {
        if (shape_clearance(o.shape, c) < env.d_min) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      env.obstacles.push_back({c, std::nullopt});
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error("monte carlo run " + std::to_string(run) + ": could not place obstacle " +
                               std::to_string(i) + " after " + std::to_string(config.max_attempts) +
                               " attempts");
    }
  }
  if (!validate_environment(env).empty()) {
    throw std::runtime_error("monte carlo run " + std::to_string(run) +
                             ": generated environment failed validation");
  }

  std::uniform_real_distribution<double> heading(-std::numbers::pi, std::numbers::pi);
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    const Vec2 p(ux(rng), uy(rng));
    const double theta = wrap_angle(heading(rng));
    if ((p - config.source).norm() <= config.stop_radius) continue;
    std::optional<ClosestObstacleQuery> q;
    try {
      q = closest_obstacle(p, env, 0.0);
    } catch (const PenetrationError&) {
      continue;
    }
    if (q && q->d_ro < d_cons) continue;
    trial.initial = ExtendedState::from_pose(p.x(), p.y(), theta, config.initial_speed);
    trial.env_hash = trial_hash(env, trial.initial);
    return trial;
  }
  throw std::runtime_error("monte carlo run " + std::to_string(run) +
                           ": could not sample an initial pose");
}

McReport run_monte_carlo(const McConfig& config) {
  config.validate();
  const SourceField field = SourceField::quadratic(config.hessian, config.source);
  const auto n_variants = config.variants.size();
  const auto n_runs = static_cast<std::size_t>(config.runs);

  McReport report;
  report.config = config;
  report.rows.resize(n_runs * n_variants);

  std::vector<McTrial> trials(n_runs);
  for (std::size_t i = 0; i < n_runs; ++i) trials[i] = make_trial(config, static_cast<int>(i));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < report.rows.size(); job = next++) {
      const McTrial& trial = trials[job / n_variants];
      const McVariant& variant = config.variants[job % n_variants];
      SimConfig sc;
      sc.dt = config.dt;
      sc.t_max = config.t_max;
      sc.stop_radius = config.stop_radius;
      sc.v_floor = config.v_floor;
      sc.max_range = config.max_range;
      sc.initial = trial.initial;
      sc.controller = variant.controller;
      const TrajectoryLog log = run(sc, trial.env, field);

      McRow& row = report.rows[job];
      row.run = trial.run;
      row.variant = variant.name;
      row.seed = trial.seed;
      row.env_hash = trial.env_hash;
      row.t_c = metric_Tc(log, config.source);
      row.d_obs = metric_Dobs(log);
      row.status = log.status;
      row.final_distance = log.records.back().distance_to_source;
      row.sim_time = log.records.back().time;
    }
  };

  unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(report.rows.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }

  for (const auto& variant : config.variants) {
    VariantSummary s;
    s.variant = variant.name;
    std::vector<double> tc;
    std::vector<double> dobs;
    for (const auto& row : report.rows) {
      if (row.variant != variant.name) continue;
      ++s.runs;
      switch (row.status) {
        case TerminalStatus::converged: ++s.converged; break;
        case TerminalStatus::timeout: ++s.timeouts; break;
        case TerminalStatus::safety_violation: ++s.violations; break;
        case TerminalStatus::qp_degenerate: ++s.degenerate; break;
      }
      if (row.d_obs < config.d_safe) ++s.trespass;
      if (row.t_c) tc.push_back(*row.t_c);
      if (std::isfinite(row.d_obs)) dobs.push_back(row.d_obs);
    }
    s.t_c = box_stats(std::move(tc));
    s.d_obs = box_stats(std::move(dobs));
    report.summaries.push_back(std::move(s));
  }
  return report;
}

std::vector<CensusLine> safety_census(const McReport& report, double rcbf_slack) {
  const double d_safe = report.config.d_safe;
  std::vector<CensusLine> out;
  for (const auto& variant : report.config.variants) {
    const ControllerKind kind = variant.controller.kind;
    int rows = 0;
    int not_converged = 0;
    int too_close = 0;
    double worst = kInf;
    for (const auto& row : report.rows) {
      if (row.variant != variant.name) continue;
      ++rows;
      worst = std::min(worst, row.d_obs);
      if (row.status != TerminalStatus::converged) ++not_converged;
      bool close = false;
      if (kind == ControllerKind::zcbf) {
        close = row.d_obs < d_safe;
      } else if (kind == ControllerKind::rcbf) {
        close = row.d_obs < d_safe - rcbf_slack || !(row.d_obs > 0.0);
      } else {
        close = row.status == TerminalStatus::safety_violation;
      }
      if (close) ++too_close;
    }
    CensusLine line;
    line.variant = variant.name;
    line.passed = rows > 0 && not_converged == 0 && too_close == 0;
    line.detail = std::to_string(rows - not_converged) + "/" + std::to_string(rows) + " converged, " +
                  std::to_string(too_close) + " below the distance threshold, min D_obs " +
                  (std::isfinite(worst) ? std::to_string(worst) : std::string("inf"));
    out.push_back(std::move(line));
  }
  return out;
}

McConfig paper_mc_config(std::uint64_t seed) {
  McConfig c;
  c.seed = seed;
  ControllerConfig base;
  base.gains = SeekGains{0.3, 30.0, true};
  base.d_kind = DFunction::Kind::plain_distance;
  base.velocity_tracking_gain = 1.0;
  base.delta = 0.1;
  base.kappa = 5.0;
  base.kappa3 = 5.0;

  McVariant zcbf{"zcbf", base};
  zcbf.controller.kind = ControllerKind::zcbf;
  McVariant rcbf{"rcbf", base};
  rcbf.controller.kind = ControllerKind::rcbf;
  c.variants = {zcbf, rcbf};
  return c;
}

}  // namespace safeseek
