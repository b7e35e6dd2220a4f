#include "safeseek/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace safeseek {

ScenarioError::ScenarioError(const std::string& message, std::string key, int line, int column)
    : std::runtime_error(line >= 1 ? "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + key + ": " + message
                                   : key + ": " + message),
      key_(std::move(key)),
      line_(line),
      column_(column) {}

namespace {

// ---------------------------------------------------------------------------
// Reading

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& path, const std::string& msg) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) throw ScenarioError(msg, path);
  throw ScenarioError(msg, path, m.line + 1, m.column + 1);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// A YAML mapping whose keys are checked against an allow-list.
class MapReader {
 public:
  MapReader(YAML::Node node, std::string path, std::set<std::string> allowed)
      : node_(std::move(node)), path_(std::move(path)) {
    if (!node_.IsMap()) fail_at(node_, path_.empty() ? "<document>" : path_, "expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) fail_at(kv.first, join(path_, key), "unknown key");
    }
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }
  YAML::Node node(const std::string& key) const { return node_[key]; }
  std::string path(const std::string& key) const { return join(path_, key); }
  const YAML::Node& self() const { return node_; }

  YAML::Node require(const std::string& key) const {
    YAML::Node n = node_[key];
    if (!n) fail_at(node_, path(key), "missing required key");
    return n;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    YAML::Node n = node_[key];
    if (!n) {
      if (fallback) return *fallback;
      fail_at(node_, path(key), "missing required key");
    }
    return as_number(n, path(key));
  }

  bool boolean(const std::string& key, bool fallback) const {
    YAML::Node n = node_[key];
    if (!n) return fallback;
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      fail_at(n, path(key), "expected true or false");
    }
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    YAML::Node n = node_[key];
    if (!n) {
      if (fallback) return *fallback;
      fail_at(node_, path(key), "missing required key");
    }
    if (!n.IsScalar()) fail_at(n, path(key), "expected a string");
    return n.as<std::string>();
  }

  long long integer(const std::string& key, long long fallback) const {
    YAML::Node n = node_[key];
    if (!n) return fallback;
    try {
      return n.as<long long>();
    } catch (const YAML::Exception&) {
      fail_at(n, path(key), "expected an integer");
    }
  }

  static double as_number(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) fail_at(n, path, "expected a number");
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail_at(n, path, "expected a number, got '" + n.Scalar() + "'");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
};

Vec2 read_vec2(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence() || n.size() != 2) fail_at(n, path, "expected [x, y]");
  return {MapReader::as_number(n[0], path + "[0]"), MapReader::as_number(n[1], path + "[1]")};
}

Mat2 read_mat2(const YAML::Node& n, const std::string& path) {
  if (!n.IsSequence() || n.size() != 2) fail_at(n, path, "expected [[a, b], [c, d]]");
  Mat2 m;
  for (int i = 0; i < 2; ++i) m.row(i) = read_vec2(n[i], path + "[" + std::to_string(i) + "]").transpose();
  return m;
}

Rect read_rect(const YAML::Node& n, const std::string& path) {
  MapReader r(n, path, {"min", "max"});
  return {read_vec2(r.require("min"), r.path("min")), read_vec2(r.require("max"), r.path("max"))};
}

Motion read_motion(const YAML::Node& n, const std::string& path) {
  MapReader r(n, path, {"velocity", "path"});
  if (r.has("velocity") == r.has("path")) fail_at(n, path, "give exactly one of velocity, path");
  if (r.has("velocity")) return ConstantVelocity{read_vec2(r.node("velocity"), r.path("velocity"))};
  MapReader p(r.node("path"), r.path("path"), {"waypoints", "speed", "phase"});
  PathLoop loop;
  const YAML::Node wp = p.require("waypoints");
  if (!wp.IsSequence() || wp.size() < 2) fail_at(wp, p.path("waypoints"), "expected at least two points");
  for (std::size_t i = 0; i < wp.size(); ++i) {
    loop.waypoints.push_back(read_vec2(wp[i], p.path("waypoints") + "[" + std::to_string(i) + "]"));
  }
  loop.speed = p.number("speed");
  loop.phase = p.number("phase", 0.0);
  if (!(loop.speed >= 0.0)) fail_at(p.node("speed"), p.path("speed"), "must be >= 0");
  if (!(loop.perimeter() > 0.0)) fail_at(wp, p.path("waypoints"), "loop has zero length");
  return loop;
}

Obstacle read_obstacle(const YAML::Node& n, const std::string& path) {
  MapReader r(n, path, {"circle", "segment", "motion"});
  if (r.has("circle") == r.has("segment")) fail_at(n, path, "give exactly one of circle, segment");
  Obstacle o;
  if (r.has("circle")) {
    MapReader c(r.node("circle"), r.path("circle"), {"center", "radius"});
    o.shape = Circle{read_vec2(c.require("center"), c.path("center")), c.number("radius")};
  } else {
    MapReader s(r.node("segment"), r.path("segment"), {"a", "b", "thickness"});
    o.shape = Segment{read_vec2(s.require("a"), s.path("a")), read_vec2(s.require("b"), s.path("b")),
                      s.number("thickness")};
  }
  if (r.has("motion")) o.motion = read_motion(r.node("motion"), r.path("motion"));
  return o;
}

Environment read_environment(const YAML::Node& n, const std::string& path) {
  MapReader r(n, path, {"bounds", "d_safe", "d_min", "obstacles"});
  Environment env;
  if (r.has("bounds")) env.bounds = read_rect(r.node("bounds"), r.path("bounds"));
  env.d_safe = r.number("d_safe", env.d_safe);
  env.d_min = r.number("d_min", env.d_min);
  if (r.has("obstacles")) {
    const YAML::Node obs = r.node("obstacles");
    if (!obs.IsSequence()) fail_at(obs, r.path("obstacles"), "expected a list");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      env.obstacles.push_back(read_obstacle(obs[i], r.path("obstacles") + "[" + std::to_string(i) + "]"));
    }
  }
  const auto violations = validate_environment(env);
  if (!violations.empty()) {
    std::string msg = "invalid environment: " + violations.front().message;
    if (violations.size() > 1) msg += " (+" + std::to_string(violations.size() - 1) + " more)";
    fail_at(n, path, msg);
  }
  return env;
}

ControllerConfig read_controller(const YAML::Node& n, const std::string& path) {
  MapReader r(n, path,
              {"kind", "k1", "k2", "normalize_perp", "delta", "kappa", "kappa3", "d_function", "gamma",
               "velocity_tracking_gain", "box"});
  ControllerConfig c;
  const std::string kind = r.string("kind", std::string(to_string(c.kind)));
  const auto parsed = parse_controller_kind(kind);
  if (!parsed) fail_at(r.node("kind"), r.path("kind"), "unknown controller '" + kind + "'");
  c.kind = *parsed;
  c.gains.k1 = r.number("k1", c.gains.k1);
  c.gains.k2 = r.number("k2", c.gains.k2);
  c.gains.normalize_perp = r.boolean("normalize_perp", c.gains.normalize_perp);
  c.delta = r.number("delta", c.delta);
  c.kappa = r.number("kappa", c.kappa);
  c.kappa3 = r.number("kappa3", c.kappa3);
  const std::string d = r.string("d_function", "smooth_bump");
  if (d == "smooth_bump") {
    c.d_kind = DFunction::Kind::smooth_bump;
  } else if (d == "plain_distance") {
    c.d_kind = DFunction::Kind::plain_distance;
  } else {
    fail_at(r.node("d_function"), r.path("d_function"), "expected smooth_bump or plain_distance");
  }
  c.gamma = r.number("gamma", c.gamma);
  c.velocity_tracking_gain = r.number("velocity_tracking_gain", c.velocity_tracking_gain);
  if (r.has("box")) {
    MapReader b(r.node("box"), r.path("box"), {"a_min", "a_max", "omega_min", "omega_max"});
    c.box = InputBox{b.number("a_min"), b.number("a_max"), b.number("omega_min"), b.number("omega_max")};
  }
  return c;
}

ExtendedState read_initial(const YAML::Node& n, const std::string& path) {
  MapReader r(n, path, {"x", "y", "theta", "v", "extended"});
  if (r.has("extended")) {
    if (r.has("x") || r.has("y") || r.has("theta") || r.has("v")) {
      fail_at(n, path, "give either extended or x/y/theta/v");
    }
    const YAML::Node e = r.node("extended");
    if (!e.IsSequence() || e.size() != 5) fail_at(e, r.path("extended"), "expected [x, y, v, xdot, ydot]");
    double xs[5];
    for (std::size_t i = 0; i < 5; ++i) xs[i] = MapReader::as_number(e[i], r.path("extended"));
    try {
      ExtendedState s = ExtendedState::from_extended(xs[0], xs[1], xs[2], xs[3], xs[4]);
      if (!s.on_manifold(1e-9)) fail_at(e, r.path("extended"), "xdot, ydot must equal v (cos theta, sin theta)");
      s.resync();
      return s;
    } catch (const std::invalid_argument& ex) {
      fail_at(e, r.path("extended"), ex.what());
    }
  }
  return ExtendedState::from_pose(r.number("x"), r.number("y"), r.number("theta"), r.number("v"));
}

OutputSpec read_output(const YAML::Node& n, const std::string& path) {
  MapReader r(n, path, {"dir", "prefix"});
  OutputSpec o;
  o.dir = r.string("dir", o.dir);
  o.prefix = r.string("prefix", "");
  return o;
}

void read_field(const YAML::Node& n, const std::string& path, Mat2& hessian, Vec2& source) {
  MapReader r(n, path, {"hessian", "source"});
  hessian = r.has("hessian") ? read_mat2(r.node("hessian"), r.path("hessian")) : Mat2::Identity();
  source = read_vec2(r.require("source"), r.path("source"));
  try {
    (void)SourceField::quadratic(hessian, source);
  } catch (const std::invalid_argument& e) {
    fail_at(r.node("hessian") ? r.node("hessian") : n, r.path("hessian"), e.what());
  }
}

YAML::Node load(const std::string& text) {
  try {
    YAML::Node root = YAML::Load(text);
    if (!root || root.IsNull()) throw ScenarioError("empty document", "<document>");
    return root;
  } catch (const YAML::ParserException& e) {
    throw ScenarioError(e.msg, "<syntax>", e.mark.line + 1, e.mark.column + 1);
  }
}

// ---------------------------------------------------------------------------
// Writing

// Shortest text that reads back to the same double.
std::string num(double x) {
  if (std::isnan(x)) return ".nan";
  if (std::isinf(x)) return x > 0 ? ".inf" : "-.inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void put_vec2(YAML::Emitter& out, const Vec2& v) {
  out << YAML::Flow << YAML::BeginSeq << num(v.x()) << num(v.y()) << YAML::EndSeq;
}

void put_rect(YAML::Emitter& out, const Rect& r) {
  out << YAML::BeginMap << YAML::Key << "min" << YAML::Value;
  put_vec2(out, r.min);
  out << YAML::Key << "max" << YAML::Value;
  put_vec2(out, r.max);
  out << YAML::EndMap;
}

void put_field(YAML::Emitter& out, const Mat2& h, const Vec2& source) {
  out << YAML::BeginMap << YAML::Key << "hessian" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (int i = 0; i < 2; ++i) put_vec2(out, h.row(i).transpose());
  out << YAML::EndSeq << YAML::Key << "source" << YAML::Value;
  put_vec2(out, source);
  out << YAML::EndMap;
}

void put_environment(YAML::Emitter& out, const Environment& env) {
  out << YAML::BeginMap;
  out << YAML::Key << "bounds" << YAML::Value;
  put_rect(out, env.bounds);
  out << YAML::Key << "d_safe" << YAML::Value << num(env.d_safe);
  out << YAML::Key << "d_min" << YAML::Value << num(env.d_min);
  out << YAML::Key << "obstacles" << YAML::Value << YAML::BeginSeq;
  for (const auto& o : env.obstacles) {
    out << YAML::BeginMap;
    if (const auto* c = std::get_if<Circle>(&o.shape)) {
      out << YAML::Key << "circle" << YAML::Value << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "center" << YAML::Value;
      put_vec2(out, c->center);
      out << YAML::Key << "radius" << YAML::Value << num(c->radius) << YAML::EndMap;
    } else {
      const auto& s = std::get<Segment>(o.shape);
      out << YAML::Key << "segment" << YAML::Value << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "a" << YAML::Value;
      put_vec2(out, s.a);
      out << YAML::Key << "b" << YAML::Value;
      put_vec2(out, s.b);
      out << YAML::Key << "thickness" << YAML::Value << num(s.thickness) << YAML::EndMap;
    }
    if (o.motion) {
      out << YAML::Key << "motion" << YAML::Value << YAML::BeginMap;
      if (const auto* cv = std::get_if<ConstantVelocity>(&*o.motion)) {
        out << YAML::Key << "velocity" << YAML::Value;
        put_vec2(out, cv->velocity);
      } else {
        const auto& p = std::get<PathLoop>(*o.motion);
        out << YAML::Key << "path" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "waypoints" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (const auto& w : p.waypoints) put_vec2(out, w);
        out << YAML::EndSeq;
        out << YAML::Key << "speed" << YAML::Value << num(p.speed);
        out << YAML::Key << "phase" << YAML::Value << num(p.phase);
        out << YAML::EndMap;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
}

void put_controller(YAML::Emitter& out, const ControllerConfig& c) {
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(c.kind));
  out << YAML::Key << "k1" << YAML::Value << num(c.gains.k1);
  out << YAML::Key << "k2" << YAML::Value << num(c.gains.k2);
  out << YAML::Key << "normalize_perp" << YAML::Value << c.gains.normalize_perp;
  out << YAML::Key << "delta" << YAML::Value << num(c.delta);
  out << YAML::Key << "kappa" << YAML::Value << num(c.kappa);
  out << YAML::Key << "kappa3" << YAML::Value << num(c.kappa3);
  out << YAML::Key << "d_function" << YAML::Value
      << (c.d_kind == DFunction::Kind::smooth_bump ? "smooth_bump" : "plain_distance");
  out << YAML::Key << "gamma" << YAML::Value << num(c.gamma);
  out << YAML::Key << "velocity_tracking_gain" << YAML::Value << num(c.velocity_tracking_gain);
  if (c.box) {
    out << YAML::Key << "box" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "a_min" << YAML::Value << num(c.box->a_min);
    out << YAML::Key << "a_max" << YAML::Value << num(c.box->a_max);
    out << YAML::Key << "omega_min" << YAML::Value << num(c.box->omega_min);
    out << YAML::Key << "omega_max" << YAML::Value << num(c.box->omega_max);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
}

void put_output(YAML::Emitter& out, const OutputSpec& o) {
  out << YAML::BeginMap << YAML::Key << "dir" << YAML::Value << o.dir;
  if (!o.prefix.empty()) out << YAML::Key << "prefix" << YAML::Value << o.prefix;
  out << YAML::EndMap;
}

YAML::Emitter& start(YAML::Emitter& out) {
  out.SetBoolFormat(YAML::TrueFalseBool);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Environment Scenario::environment_for_seed(std::uint64_t run_seed) const {
  Environment e = env;
  if (randomize_phases) randomize_path_phases(e, run_seed);
  return e;
}

void randomize_path_phases(Environment& env, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& o : env.obstacles) {
    if (!o.motion) continue;
    if (auto* p = std::get_if<PathLoop>(&*o.motion)) {
      std::uniform_real_distribution<double> u(0.0, p->perimeter());
      p->phase = u(rng);
    }
  }
}

bool is_monte_carlo_document(const std::string& text) {
  const YAML::Node root = load(text);
  return root.IsMap() && static_cast<bool>(root["monte_carlo"]);
}

Scenario parse_scenario(const std::string& text) {
  const YAML::Node root = load(text);
  MapReader r(root, "", {"name", "field", "environment", "controller", "sim", "initial", "output", "seed",
                         "randomize_phases"});
  Scenario s;
  s.name = r.string("name");
  read_field(r.require("field"), "field", s.hessian, s.source);
  s.env = r.has("environment") ? read_environment(r.node("environment"), "environment") : Environment{};
  if (r.has("controller")) s.sim.controller = read_controller(r.node("controller"), "controller");
  if (r.has("sim")) {
    MapReader m(r.node("sim"), "sim", {"dt", "t_max", "stop_radius", "v_floor", "max_range"});
    s.sim.dt = m.number("dt", s.sim.dt);
    s.sim.t_max = m.number("t_max", s.sim.t_max);
    s.sim.stop_radius = m.number("stop_radius", s.sim.stop_radius);
    s.sim.v_floor = m.number("v_floor", s.sim.v_floor);
    s.sim.max_range = m.number("max_range", s.sim.max_range);
  }
  s.sim.initial = read_initial(r.require("initial"), "initial");
  if (r.has("output")) s.output = read_output(r.node("output"), "output");
  const long long seed = r.integer("seed", 0);
  if (seed < 0) fail_at(r.node("seed"), "seed", "must be >= 0");
  s.seed = static_cast<std::uint64_t>(seed);
  s.randomize_phases = r.boolean("randomize_phases", false);

  try {
    s.sim.validate_against(s.environment_for_seed(s.seed));
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const bool about_initial = msg.find("initial") != std::string::npos;
    fail_at(about_initial ? r.node("initial") : root, about_initial ? "initial" : "<document>", msg);
  }
  return s;
}

McScenario parse_mc_scenario(const std::string& text) {
  const YAML::Node root = load(text);
  MapReader r(root, "", {"name", "monte_carlo", "output"});
  McScenario s;
  s.name = r.string("name");
  MapReader m(r.require("monte_carlo"), "monte_carlo",
              {"runs", "seed", "workspace", "obstacle_count", "radius_set", "d_safe", "d_min", "field",
               "initial_speed", "dt", "t_max", "stop_radius", "v_floor", "max_range", "max_attempts",
               "threads", "variants"});
  McConfig& c = s.config;
  c.runs = static_cast<int>(m.integer("runs", c.runs));
  const long long seed = m.integer("seed", static_cast<long long>(c.seed));
  if (seed < 0) fail_at(m.node("seed"), m.path("seed"), "must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  if (m.has("workspace")) c.workspace = read_rect(m.node("workspace"), m.path("workspace"));
  c.obstacle_count = static_cast<int>(m.integer("obstacle_count", c.obstacle_count));
  if (m.has("radius_set")) {
    const YAML::Node rs = m.node("radius_set");
    if (!rs.IsSequence()) fail_at(rs, m.path("radius_set"), "expected a list");
    c.radius_set.clear();
    for (const auto& x : rs) c.radius_set.push_back(MapReader::as_number(x, m.path("radius_set")));
  }
  c.d_safe = m.number("d_safe", c.d_safe);
  c.d_min = m.number("d_min", c.d_min);
  if (m.has("field")) read_field(m.node("field"), m.path("field"), c.hessian, c.source);
  c.initial_speed = m.number("initial_speed", c.initial_speed);
  c.dt = m.number("dt", c.dt);
  c.t_max = m.number("t_max", c.t_max);
  c.stop_radius = m.number("stop_radius", c.stop_radius);
  c.v_floor = m.number("v_floor", c.v_floor);
  c.max_range = m.number("max_range", c.max_range);
  c.max_attempts = static_cast<int>(m.integer("max_attempts", c.max_attempts));
  c.threads = static_cast<int>(m.integer("threads", c.threads));
  const YAML::Node vs = m.require("variants");
  if (!vs.IsSequence()) fail_at(vs, m.path("variants"), "expected a list");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string p = m.path("variants") + "[" + std::to_string(i) + "]";
    MapReader v(vs[i], p, {"name", "controller"});
    c.variants.push_back({v.string("name"), read_controller(v.require("controller"), v.path("controller"))});
  }
  if (r.has("output")) s.output = read_output(r.node("output"), "output");
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    fail_at(m.self(), "monte_carlo", e.what());
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter out;
  start(out) << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  out << YAML::Key << "randomize_phases" << YAML::Value << s.randomize_phases;
  out << YAML::Key << "field" << YAML::Value;
  put_field(out, s.hessian, s.source);
  out << YAML::Key << "environment" << YAML::Value;
  put_environment(out, s.env);
  out << YAML::Key << "controller" << YAML::Value;
  put_controller(out, s.sim.controller);
  out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dt" << YAML::Value << num(s.sim.dt);
  out << YAML::Key << "t_max" << YAML::Value << num(s.sim.t_max);
  out << YAML::Key << "stop_radius" << YAML::Value << num(s.sim.stop_radius);
  out << YAML::Key << "v_floor" << YAML::Value << num(s.sim.v_floor);
  out << YAML::Key << "max_range" << YAML::Value << num(s.sim.max_range);
  out << YAML::EndMap;
  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "x" << YAML::Value << num(s.sim.initial.x);
  out << YAML::Key << "y" << YAML::Value << num(s.sim.initial.y);
  out << YAML::Key << "theta" << YAML::Value << num(s.sim.initial.theta);
  out << YAML::Key << "v" << YAML::Value << num(s.sim.initial.v);
  out << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value;
  put_output(out, s.output);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string serialize_mc_scenario(const McScenario& s) {
  const McConfig& c = s.config;
  YAML::Emitter out;
  start(out) << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "monte_carlo" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "runs" << YAML::Value << c.runs;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "workspace" << YAML::Value;
  put_rect(out, c.workspace);
  out << YAML::Key << "obstacle_count" << YAML::Value << c.obstacle_count;
  out << YAML::Key << "radius_set" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double r : c.radius_set) out << num(r);
  out << YAML::EndSeq;
  out << YAML::Key << "d_safe" << YAML::Value << num(c.d_safe);
  out << YAML::Key << "d_min" << YAML::Value << num(c.d_min);
  out << YAML::Key << "field" << YAML::Value;
  put_field(out, c.hessian, c.source);
  out << YAML::Key << "initial_speed" << YAML::Value << num(c.initial_speed);
  out << YAML::Key << "dt" << YAML::Value << num(c.dt);
  out << YAML::Key << "t_max" << YAML::Value << num(c.t_max);
  out << YAML::Key << "stop_radius" << YAML::Value << num(c.stop_radius);
  out << YAML::Key << "v_floor" << YAML::Value << num(c.v_floor);
  out << YAML::Key << "max_range" << YAML::Value << num(c.max_range);
  out << YAML::Key << "max_attempts" << YAML::Value << c.max_attempts;
  out << YAML::Key << "threads" << YAML::Value << c.threads;
  out << YAML::Key << "variants" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : c.variants) {
    out << YAML::BeginMap << YAML::Key << "name" << YAML::Value << v.name;
    out << YAML::Key << "controller" << YAML::Value;
    put_controller(out, v.controller);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value;
  put_output(out, s.output);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Bundled scenarios

namespace {

Environment fig2_environment() {
  Environment env;
  env.bounds = {{0.0, 0.0}, {10.0, 10.0}};
  env.d_safe = 0.1;
  env.d_min = 0.8;
  const double circles[][3] = {{2.0, 2.1, 0.8}, {4.9, 1.3, 1.0}, {1.3, 4.8, 0.9},
                               {4.3, 4.4, 1.2}, {7.6, 2.6, 0.7}, {2.8, 7.6, 1.0},
                               {6.7, 6.7, 0.8}, {8.7, 4.9, 0.9}, {5.3, 9.1, 0.7}};
  for (const auto& c : circles) env.obstacles.push_back({Circle{{c[0], c[1]}, c[2]}, std::nullopt});
  return env;
}

ControllerConfig fig2_controller(double k1) {
  ControllerConfig c;
  c.kind = ControllerKind::zcbf;
  c.gains = SeekGains{k1, 5.0, true};
  c.delta = 0.1;
  c.kappa = 5.0;
  c.kappa3 = 5.0;
  c.d_kind = DFunction::Kind::smooth_bump;
  c.gamma = 1.0;
  c.velocity_tracking_gain = 1.0;
  return c;
}

Scenario fig2(const std::string& name, const Mat2& h, double k1, const Vec2& start) {
  Scenario s;
  s.name = name;
  s.hessian = h;
  s.source = Vec2::Zero();
  s.env = fig2_environment();
  s.sim.t_max = 60.0;
  s.sim.controller = fig2_controller(k1);
  s.sim.initial = ExtendedState::from_pose(start.x(), start.y(), std::atan2(-start.y(), -start.x()), 0.5);
  return s;
}

Obstacle wall(Vec2 a, Vec2 b) { return {Segment{a, b, 0.2}, std::nullopt}; }

Obstacle pedestrian(std::vector<Vec2> loop, double speed) {
  const Vec2 start = loop.front();
  return {Circle{start, 0.3}, PathLoop{std::move(loop), speed, 0.0}};
}

Scenario gazebo_replica() {
  Scenario s;
  s.name = "gazebo_replica";
  s.hessian = Mat2::Identity();
  s.source = Vec2(-3.0, 2.0);
  Environment& env = s.env;
  env.bounds = {{-7.0, -4.5}, {5.0, 6.5}};
  env.d_safe = 0.3;
  env.d_min = 1.2;
  // Room walls, open at the corners.
  env.obstacles.push_back(wall({-5.0, -4.0}, {3.0, -4.0}));
  env.obstacles.push_back(wall({-5.0, 6.0}, {3.0, 6.0}));
  env.obstacles.push_back(wall({-6.8, -2.6}, {-6.8, 4.6}));
  env.obstacles.push_back(wall({4.6, -2.6}, {4.6, 4.6}));
  // Walking people.
  env.obstacles.push_back(pedestrian({{-2.0, -0.2}, {-1.0, -0.2}, {-1.0, 1.4}, {-2.0, 1.4}}, 0.2));
  env.obstacles.push_back(pedestrian({{-5.0, -2.4}, {-3.5, -2.4}, {-3.5, -1.5}, {-5.0, -1.5}}, 0.4));
  env.obstacles.push_back(pedestrian({{2.0, 3.4}, {-4.5, 3.4}, {-4.5, 4.3}, {2.0, 4.3}}, 1.0));
  s.randomize_phases = true;
  s.sim.t_max = 120.0;
  s.sim.max_range = 3.5;
  ControllerConfig& c = s.sim.controller;
  c.kind = ControllerKind::zcbf;
  c.gains = SeekGains{0.2, 0.5, false};
  c.delta = 0.1;
  c.kappa = 5.0;
  c.kappa3 = 5.0;
  c.gamma = 1.0;
  c.velocity_tracking_gain = 1.0;
  const double r = std::sqrt(2.0) / 4.0;
  s.sim.initial = ExtendedState::from_extended(0.0, 0.0, 0.5, r, r);
  s.sim.initial.resync();
  return s;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() { return {"fig2a", "fig2b", "gazebo_replica"}; }

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  if (name == "fig2a") {
    s = fig2("fig2a", Mat2::Identity(), 1.0, {9.0, 8.5});
  } else if (name == "fig2b") {
    s = fig2("fig2b", (Mat2() << 5.0, 4.0, 4.0, 5.0).finished(), 0.5, {9.5, 3.5});
  } else if (name == "gazebo_replica") {
    s = gazebo_replica();
  } else {
    throw std::invalid_argument("unknown bundled scenario '" + name + "'");
  }
  s.env = make_environment(std::move(s.env));
  return s;
}

McScenario builtin_mc_scenario(const std::string& name) {
  if (name != "paper_mc") throw std::invalid_argument("unknown bundled campaign '" + name + "'");
  McScenario s;
  s.name = name;
  s.config = paper_mc_config(1);
  return s;
}

}  // namespace safeseek
