#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwc/fsm.hpp"

namespace cwc {

/// Walk description read from a JSON-lines file: one header record, then one
/// record per footstep.
struct Scenario
{
  std::string name = "scenario";
  Walk walk;
  FsmTiming timing;
  std::uint64_t seed = 0;
};

/// Schema violation with the offending line (1-based) and field.
class ScenarioError : public std::runtime_error
{
public:
  ScenarioError(int line, std::string field, const std::string& what);

  int line() const { return line_; }
  const std::string& field() const { return field_; }

private:
  int line_;
  std::string field_;
};

/// Throws ScenarioError. Defaulted fields that deserve attention (friction)
/// are reported through `warnings`.
Scenario parse_scenario(std::istream& in, std::vector<std::string>* warnings = nullptr);
Scenario load_scenario(const std::string& path, std::vector<std::string>* warnings = nullptr);
void write_scenario(std::ostream& out, const Scenario& s);

struct StaircaseOptions
{
  std::uint64_t seed = 42;
  int steps = 26;
  /// Average radius of the staircase (m).
  double radius = 1.4;
  /// Altitude gain from first to last footstep (m).
  double height = 1.4;
  /// Roll, pitch and yaw perturbations are uniform in [-tilt_range, tilt_range].
  double tilt_range = 0.5;
  /// Angle between consecutive footsteps around the center (rad).
  double angular_step = 0.18;
  /// Left feet sit this much inside the average radius, right feet outside.
  double half_spacing = 0.1;
  double foot_length = 0.24;
  double foot_width = 0.16;
  double mu = 0.7;
};

/// Counter-clockwise circular stairs, one footstep per stair, alternating
/// feet starting with the left one. Deterministic per seed.
/// Throws std::invalid_argument when steps < 2.
Scenario generate_staircase(const StaircaseOptions& o = {});

struct FlatWalkOptions
{
  int steps = 4;
  double stride = 0.2;
  double half_spacing = 0.1;
  double foot_length = 0.24;
  double foot_width = 0.16;
  double mu = 0.7;
};

/// Straight walk along +x on flat ground.
Scenario flat_walk(const FlatWalkOptions& o = {});

}  // namespace cwc
