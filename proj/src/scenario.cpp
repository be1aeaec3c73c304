#include "cwc/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

namespace cwc {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "cwcwalk-scenario";
constexpr int kVersion = 1;

Mat3 rotation_rpy(const Vec3& rpy)
{
  return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) * Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

Vec3 rpy_of(const Mat3& R)
{
  const Vec3 ypr = R.eulerAngles(2, 1, 0);
  return {ypr.z(), ypr.y(), ypr.x()};
}

double number(const json& j, const char* key, int line, double fallback, bool* present = nullptr)
{
  const auto it = j.find(key);
  if (present) *present = it != j.end();
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw ScenarioError(line, key, "expected a number");
  return it->get<double>();
}

double positive(const json& j, const char* key, int line, double fallback, bool* present = nullptr)
{
  const double v = number(j, key, line, fallback, present);
  if (!(v > 0.) || !std::isfinite(v)) throw ScenarioError(line, key, "must be positive");
  return v;
}

Vec3 vec3(const json& j, const char* key, int line, const std::optional<Vec3>& fallback)
{
  const auto it = j.find(key);
  if (it == j.end()) {
    if (fallback) return *fallback;
    throw ScenarioError(line, key, "missing field");
  }
  if (!it->is_array() || it->size() != 3) throw ScenarioError(line, key, "expected an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!(*it)[i].is_number()) throw ScenarioError(line, key, "expected an array of 3 numbers");
    v(i) = (*it)[i].get<double>();
    if (!std::isfinite(v(i))) throw ScenarioError(line, key, "non-finite value");
  }
  return v;
}

}  // namespace

ScenarioError::ScenarioError(int line, std::string field, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ", " : std::string()) +
                         (field.empty() ? std::string() : "field '" + field + "': ") + what),
      line_(line),
      field_(std::move(field))
{
}

Scenario parse_scenario(std::istream& in, std::vector<std::string>* warnings)
{
  Scenario s;
  std::string text;
  int line = 0, header_line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ScenarioError(line, "", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ScenarioError(line, "", "expected a JSON object");

    if (!have_header) {
      const auto fmt = j.find("format");
      if (fmt == j.end() || !fmt->is_string() || fmt->get<std::string>() != kFormat) {
        throw ScenarioError(line, "format", std::string("expected \"") + kFormat + "\"");
      }
      const auto ver = j.find("version");
      if (ver == j.end() || !ver->is_number_integer() || ver->get<int>() != kVersion) {
        throw ScenarioError(line, "version", "unsupported version");
      }
      if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) throw ScenarioError(line, "name", "expected a string");
        s.name = it->get<std::string>();
      }
      bool has_mu = false;
      s.walk.mu = positive(j, "friction", line, 0.7, &has_mu);
      if (!has_mu && warnings) warnings->push_back("line " + std::to_string(line) + ": no 'friction', using 0.7");
      s.timing.T_ss = positive(j, "T_ss", line, 1.);
      s.timing.T_ds = positive(j, "T_ds", line, 0.5);
      s.walk.com_height = positive(j, "com_height", line, 0.8);
      if (auto it = j.find("friction_edges"); it != j.end()) {
        if (!it->is_number_integer() || it->get<int>() < 3) throw ScenarioError(line, "friction_edges", "integer >= 3 expected");
        s.walk.friction_edges = it->get<int>();
      }
      if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned()) throw ScenarioError(line, "seed", "expected a nonnegative integer");
        s.seed = it->get<std::uint64_t>();
      }
      have_header = true;
      header_line = line;
      continue;
    }

    Footstep f;
    const auto foot = j.find("foot");
    if (foot == j.end() || !foot->is_string()) throw ScenarioError(line, "foot", "expected \"L\" or \"R\"");
    const std::string side = foot->get<std::string>();
    if (side == "L") {
      f.foot = Foot::Left;
    } else if (side == "R") {
      f.foot = Foot::Right;
    } else {
      throw ScenarioError(line, "foot", "expected \"L\" or \"R\"");
    }
    if (!s.walk.steps.empty() && s.walk.steps.back().foot == f.foot) throw ScenarioError(line, "foot", "feet must alternate");
    f.position = vec3(j, "position", line, std::nullopt);
    f.rotation = rotation_rpy(vec3(j, "rpy", line, Vec3::Zero()));
    f.length = positive(j, "length", line, f.length);
    f.width = positive(j, "width", line, f.width);
    s.walk.steps.push_back(f);
  }
  if (!have_header) throw ScenarioError(line, "format", "empty scenario");
  if (s.walk.size() < 2) throw ScenarioError(header_line, "footsteps", "at least two footsteps required");
  return s;
}

Scenario load_scenario(const std::string& path, std::vector<std::string>* warnings)
{
  std::ifstream in(path);
  if (!in) throw ScenarioError(0, "", "cannot open " + path);
  return parse_scenario(in, warnings);
}

void write_scenario(std::ostream& out, const Scenario& s)
{
  out << json{{"format", kFormat},
              {"version", kVersion},
              {"name", s.name},
              {"friction", s.walk.mu},
              {"friction_edges", s.walk.friction_edges},
              {"T_ss", s.timing.T_ss},
              {"T_ds", s.timing.T_ds},
              {"com_height", s.walk.com_height},
              {"seed", s.seed}}
             .dump()
      << '\n';
  for (const auto& f : s.walk.steps) {
    const Vec3 rpy = rpy_of(f.rotation);
    out << json{{"foot", to_string(f.foot)},
                {"position", {f.position.x(), f.position.y(), f.position.z()}},
                {"rpy", {rpy.x(), rpy.y(), rpy.z()}},
                {"length", f.length},
                {"width", f.width}}
               .dump()
        << '\n';
  }
}

Scenario generate_staircase(const StaircaseOptions& o)
{
  if (o.steps < 2) throw std::invalid_argument("generate_staircase: steps must be at least 2");
  Scenario s;
  s.name = "staircase";
  s.seed = o.seed;
  s.walk.mu = o.mu;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> tilt(-o.tilt_range, o.tilt_range);
  for (int i = 0; i < o.steps; ++i) {
    Footstep f;
    f.foot = i % 2 == 0 ? Foot::Left : Foot::Right;
    const double theta = i * o.angular_step;
    const double r = o.radius + (f.foot == Foot::Left ? -o.half_spacing : o.half_spacing);
    f.position = Vec3(r * std::cos(theta), r * std::sin(theta), o.height * i / (o.steps - 1));
    const double roll = tilt(rng), pitch = tilt(rng), yaw = tilt(rng);
    f.rotation = rotation_rpy(Vec3(roll, pitch, theta + M_PI / 2 + yaw));
    f.length = o.foot_length;
    f.width = o.foot_width;
    s.walk.steps.push_back(f);
  }
  return s;
}

Scenario flat_walk(const FlatWalkOptions& o)
{
  Scenario s;
  s.name = "flat";
  s.walk.mu = o.mu;
  for (int i = 0; i < o.steps; ++i) {
    Footstep f;
    f.foot = i % 2 == 0 ? Foot::Left : Foot::Right;
    f.position = Vec3(i * o.stride, f.foot == Foot::Left ? o.half_spacing : -o.half_spacing, 0.);
    f.length = o.foot_length;
    f.width = o.foot_width;
    s.walk.steps.push_back(f);
  }
  return s;
}

}  // namespace cwc
