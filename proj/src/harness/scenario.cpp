#include "l1quad/harness/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace l1quad::harness {

namespace {

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field,
                         const std::string& why) const {
    std::ostringstream os;
    os << source_;
    const YAML::Mark mark = node.Mark();
    if (!mark.is_null()) os << ":" << mark.line + 1;
    os << ": field '" << field << "': " << why;
    throw Error(ErrorCode::ParseError, os.str());
  }

  void require_map(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
  }

  void check_keys(const YAML::Node& node, const std::string& field,
                  std::initializer_list<const char*> allowed) const {
    require_map(node, field);
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) {
        fail(kv.first, join(field, key), "unknown key");
      }
    }
  }

  double number(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a number");
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, field, "expected a number, got '" + node.Scalar() + "'");
    }
  }

  bool boolean(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected true/false");
    const std::string& s = node.Scalar();
    if (s == "on") return true;
    if (s == "off") return false;
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(node, field, "expected true/false/on/off, got '" + s + "'");
    }
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a string");
    return node.Scalar();
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& field,
                              std::size_t expected) const {
    if (!node.IsSequence() || (expected && node.size() != expected)) {
      fail(node, field, "expected a list of " + std::to_string(expected) + " numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(number(node[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  Vec3 vec3(const YAML::Node& node, const std::string& field) const {
    const auto v = numbers(node, field, 3);
    return Vec3(v[0], v[1], v[2]);
  }

  // Either a diagonal [a, b, c] or a full row-major 3x3 nested list.
  Mat3 mat3(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence() || node.size() != 3) {
      fail(node, field, "expected a diagonal [a, b, c] or a 3x3 nested list");
    }
    if (node[0].IsScalar()) {
      return vec3(node, field).asDiagonal().toDenseMatrix();
    }
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
      m.row(r) = vec3(node[r], field + "[" + std::to_string(r) + "]").transpose();
    }
    return m;
  }

  TimeWindow window(const YAML::Node& node, const std::string& field) const {
    const auto v = numbers(node, field, 2);
    return {v[0], v[1]};
  }

  SignalTerm term(const YAML::Node& node, const std::string& field) const {
    check_keys(node, field, {"type", "amp", "omega", "t0", "factor"});
    if (!node["type"]) fail(node, field, "missing 'type' (const, sin or ramp)");
    if (!node["amp"]) fail(node, field, "missing 'amp'");
    const std::string type = text(node["type"], join(field, "type"));
    SignalTerm t;
    t.amplitude = number(node["amp"], join(field, "amp"));
    if (node["t0"]) t.t0 = number(node["t0"], join(field, "t0"));
    if (type == "const") {
      t.kind = TermKind::Constant;
    } else if (type == "sin") {
      t.kind = TermKind::Sine;
      if (!node["omega"]) fail(node, field, "sin term needs 'omega'");
      t.omega = number(node["omega"], join(field, "omega"));
    } else if (type == "ramp") {
      t.kind = TermKind::Ramp;
    } else {
      fail(node["type"], join(field, "type"), "unknown term type '" + type + "'");
    }
    if (node["factor"]) {
      const std::string factor = text(node["factor"], join(field, "factor"));
      if (factor != "p1_squared") {
        fail(node["factor"], join(field, "factor"), "only 'p1_squared' is supported");
      }
      t.factor = StateFactor::NorthSquared;
    }
    return t;
  }

  Signal signal(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence()) fail(node, field, "expected a list of signal terms");
    Signal s;
    for (std::size_t i = 0; i < node.size(); ++i) {
      s.terms.push_back(term(node[i], field + "[" + std::to_string(i) + "]"));
    }
    return s;
  }

  template <std::size_t N>
  void channels(const YAML::Node& node, const std::string& field,
                const std::array<const char*, N>& names, std::array<Signal, N>& out) const {
    require_map(node, field);
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      bool found = false;
      for (std::size_t i = 0; i < N; ++i) {
        if (key == names[i]) {
          out[i] = signal(kv.second, join(field, key));
          found = true;
        }
      }
      if (!found) fail(kv.first, join(field, key), "unknown channel");
    }
  }

  static std::string join(const std::string& a, const std::string& b) {
    return a.empty() ? b : a + "." + b;
  }

 private:
  std::string source_;
};

constexpr std::array<const char*, 4> kWrenchChannels = {"thrust", "roll", "pitch", "yaw"};
constexpr std::array<const char*, 2> kUnmatchedChannels = {"x", "y"};
constexpr std::array<const char*, 3> kAxisChannels = {"x", "y", "z"};

TrajectoryKind parse_kind(const Parser& p, const YAML::Node& node) {
  const std::string kind = p.text(node, "trajectory.kind");
  if (kind == "hover") return TrajectoryKind::Hover;
  if (kind == "figure8") return TrajectoryKind::Figure8;
  if (kind == "tilted_figure8") return TrajectoryKind::TiltedFigure8;
  p.fail(node, "trajectory.kind", "expected hover, figure8 or tilted_figure8");
}

void parse_uncertainty(const Parser& p, const YAML::Node& node, UncertaintySpec& u) {
  p.check_keys(node, "uncertainty",
               {"window", "scale", "matched", "unmatched", "input_gain", "force", "moment",
                "effectiveness"});
  if (node["window"]) {
    const TimeWindow w = p.window(node["window"], "uncertainty.window");
    u.t_on = w.begin;
    u.t_off = w.end;
  }
  if (node["matched"]) p.channels(node["matched"], "uncertainty.matched", kWrenchChannels, u.matched);
  if (node["unmatched"]) {
    p.channels(node["unmatched"], "uncertainty.unmatched", kUnmatchedChannels, u.unmatched);
  }
  if (node["input_gain"]) {
    p.channels(node["input_gain"], "uncertainty.input_gain", kWrenchChannels, u.gain_deviation);
  }
  if (node["force"]) p.channels(node["force"], "uncertainty.force", kAxisChannels, u.force);
  if (node["moment"]) p.channels(node["moment"], "uncertainty.moment", kAxisChannels, u.moment);
  if (node["effectiveness"]) {
    const auto v = p.numbers(node["effectiveness"], "uncertainty.effectiveness", 4);
    u.effectiveness = Vec4(v[0], v[1], v[2], v[3]);
  }
  if (node["scale"]) {
    const double k = p.number(node["scale"], "uncertainty.scale");
    for (auto& s : u.matched) s = s.scaled(k);
    for (auto& s : u.unmatched) s = s.scaled(k);
    for (auto& s : u.gain_deviation) s = s.scaled(k);
    for (auto& s : u.force) s = s.scaled(k);
    for (auto& s : u.moment) s = s.scaled(k);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int ScenarioConfig::substeps() const {
  return static_cast<int>(std::lround(control_period() / plant_dt));
}

int ScenarioConfig::control_ticks() const {
  return static_cast<int>(std::lround(duration * control_rate));
}

void validate(const ScenarioConfig& c) {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  };
  auto guarded = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  };

  check(c.duration > 0.0 && std::isfinite(c.duration), "duration must be positive");
  check(c.control_rate > 0.0 && std::isfinite(c.control_rate), "control_rate must be positive");
  check(c.plant_dt > 0.0 && c.plant_dt <= 0.01, "plant_dt must lie in (0, 0.01]");
  if (c.control_rate > 0.0 && c.plant_dt > 0.0) {
    const double ratio = c.control_period() / c.plant_dt;
    check(std::lround(ratio) >= 1 && std::abs(ratio - std::lround(ratio)) < 1e-9,
          "control period must be an integer multiple of plant_dt");
    check(std::abs(c.l1.sample_time - c.control_period()) < 1e-12,
          "l1.sample_time must equal the control period (L1 runs once per control tick)");
  }
  check(c.saturation.thrust_min >= 0.0 && c.saturation.thrust_max > c.saturation.thrust_min,
        "saturation.thrust must satisfy 0 <= min < max");
  check(c.saturation.moment_max > 0.0, "saturation.moment must be positive");
  check(c.mixer.arm_length > 0.0 && c.mixer.torque_coefficient > 0.0,
        "mixer arm_length and torque_coefficient must be positive");
  check((c.uncertainty.effectiveness.array() >= 0.0).all() &&
            (c.uncertainty.effectiveness.array() <= 1.0).all(),
        "uncertainty.effectiveness entries must lie in [0, 1]");
  check(c.uncertainty.t_off >= c.uncertainty.t_on, "uncertainty.window must be ordered");
  if (c.metrics_window) {
    check(c.metrics_window->end > c.metrics_window->begin, "metrics.window must be ordered");
  }
  guarded([&] { c.phys.validate(); });
  guarded([&] { c.gains.validate(); });
  guarded([&] { c.l1.validate(); });
  guarded([&] { trajectory::validate(c.trajectory, c.phys.gravity); });

  if (!problems.empty()) {
    std::ostringstream os;
    os << "scenario '" << c.name << "':";
    for (const auto& p : problems) os << "\n  - " << p;
    throw Error(ErrorCode::ValidationError, os.str());
  }
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& source) {
  const Parser p(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ": " << e.msg;
    throw Error(ErrorCode::ParseError, os.str());
  }

  ScenarioConfig c;
  if (source != "<string>") c.name = std::filesystem::path(source).stem().string();
  if (root.IsNull()) {
    validate(c);
    return c;
  }
  p.check_keys(root, "",
               {"name", "duration", "control_rate", "plant_dt", "seed", "trajectory", "physical",
                "mixer", "gains", "l1", "saturation", "uncertainty", "metrics"});

  if (root["name"]) c.name = p.text(root["name"], "name");
  if (root["duration"]) c.duration = p.number(root["duration"], "duration");
  if (root["control_rate"]) c.control_rate = p.number(root["control_rate"], "control_rate");
  if (root["plant_dt"]) c.plant_dt = p.number(root["plant_dt"], "plant_dt");
  if (root["seed"]) c.seed = static_cast<unsigned>(p.number(root["seed"], "seed"));

  if (const auto n = root["physical"]) {
    p.check_keys(n, "physical", {"mass", "inertia", "gravity"});
    if (n["mass"]) c.phys.mass = p.number(n["mass"], "physical.mass");
    if (n["inertia"]) c.phys.inertia = p.mat3(n["inertia"], "physical.inertia");
    if (n["gravity"]) c.phys.gravity = p.number(n["gravity"], "physical.gravity");
  }
  // Default thrust ceiling follows the (possibly overridden) weight.
  c.saturation.thrust_max = 2.0 * c.phys.mass * c.phys.gravity;

  if (const auto n = root["trajectory"]) {
    p.check_keys(n, "trajectory", {"kind", "center", "amplitude", "period", "yaw"});
    if (n["kind"]) c.trajectory.kind = parse_kind(p, n["kind"]);
    if (n["center"]) c.trajectory.center = p.vec3(n["center"], "trajectory.center");
    if (n["amplitude"]) {
      const Vec3 a = p.vec3(n["amplitude"], "trajectory.amplitude");
      c.trajectory.amplitude_x = a.x();
      c.trajectory.amplitude_y = a.y();
      c.trajectory.amplitude_z = a.z();
    }
    if (n["period"]) c.trajectory.period = p.number(n["period"], "trajectory.period");
    if (n["yaw"]) c.trajectory.yaw = p.number(n["yaw"], "trajectory.yaw");
  }

  if (const auto n = root["mixer"]) {
    p.check_keys(n, "mixer", {"arm_length", "torque_coefficient"});
    if (n["arm_length"]) c.mixer.arm_length = p.number(n["arm_length"], "mixer.arm_length");
    if (n["torque_coefficient"]) {
      c.mixer.torque_coefficient = p.number(n["torque_coefficient"], "mixer.torque_coefficient");
    }
  }

  if (const auto n = root["gains"]) {
    p.check_keys(n, "gains", {"kp", "kv", "kr", "kw"});
    if (n["kp"]) c.gains.kp = p.mat3(n["kp"], "gains.kp");
    if (n["kv"]) c.gains.kv = p.mat3(n["kv"], "gains.kv");
    if (n["kr"]) c.gains.kr = p.mat3(n["kr"], "gains.kr");
    if (n["kw"]) c.gains.kw = p.mat3(n["kw"], "gains.kw");
  }

  if (const auto n = root["l1"]) {
    p.check_keys(n, "l1",
                 {"enabled", "hurwitz", "sample_time", "thrust_bandwidth", "moment_bandwidth"});
    if (n["enabled"]) c.l1_enabled = p.boolean(n["enabled"], "l1.enabled");
    if (n["hurwitz"]) {
      const auto v = p.numbers(n["hurwitz"], "l1.hurwitz", 6);
      for (int i = 0; i < 6; ++i) c.l1.hurwitz_diagonal(i) = v[i];
    }
    if (n["sample_time"]) c.l1.sample_time = p.number(n["sample_time"], "l1.sample_time");
    if (n["thrust_bandwidth"]) {
      c.l1.thrust_bandwidth = p.number(n["thrust_bandwidth"], "l1.thrust_bandwidth");
    }
    if (n["moment_bandwidth"]) {
      const auto v = p.numbers(n["moment_bandwidth"], "l1.moment_bandwidth", 2);
      c.l1.moment_bandwidth_1 = v[0];
      c.l1.moment_bandwidth_2 = v[1];
    }
  }

  if (const auto n = root["saturation"]) {
    p.check_keys(n, "saturation", {"thrust", "moment"});
    if (n["thrust"]) {
      const auto v = p.numbers(n["thrust"], "saturation.thrust", 2);
      c.saturation.thrust_min = v[0];
      c.saturation.thrust_max = v[1];
    }
    if (n["moment"]) c.saturation.moment_max = p.number(n["moment"], "saturation.moment");
  }

  if (const auto n = root["uncertainty"]) parse_uncertainty(p, n, c.uncertainty);

  if (const auto n = root["metrics"]) {
    p.check_keys(n, "metrics", {"window"});
    if (n["window"]) c.metrics_window = p.window(n["window"], "metrics.window");
  }

  validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::string& path_or_id) {
  if (!std::filesystem::exists(path_or_id) && is_builtin(path_or_id)) {
    return builtin_scenario(path_or_id);
  }
  if (!std::filesystem::exists(path_or_id)) {
    throw Error(ErrorCode::UnknownScenario,
                "'" + path_or_id + "' is neither a file nor a built-in scenario id");
  }
  ScenarioConfig c = parse_scenario(read_file(path_or_id), path_or_id);
  return c;
}

}  // namespace l1quad::harness
