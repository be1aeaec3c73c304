#pragma once

#include <optional>
#include <vector>

#include "cwc/contact.hpp"
#include "cwc/preview.hpp"
#include "cwc/stability.hpp"
#include "cwc/tube.hpp"

namespace cwc {

enum class Foot
{
  Left,
  Right,
};

const char* to_string(Foot f);

/// Rectangular foot placement.
struct Footstep
{
  Foot foot = Foot::Left;
  Vec3 position = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
  double length = 0.22;
  double width = 0.14;
};

/// Contacts active during a phase: footsteps first .. first + count - 1.
struct Stance
{
  int first = 0;
  int count = 1;

  bool single() const { return count == 1; }
  bool operator==(const Stance&) const = default;
};

/// Footsteps in walking order (alternating feet) and the contact model.
struct Walk
{
  std::vector<Footstep> steps;
  double mu = 0.7;
  int friction_edges = 4;
  double com_height = 0.8;

  int size() const { return static_cast<int>(steps.size()); }
  ContactSet contacts(const Stance& s) const;
  /// COM target of the phase ending on footstep i: com_height above it.
  Vec3 com_target(int i) const;
  /// Resting COM over the last two footsteps.
  Vec3 final_target() const;
  /// Unit direction of progress through footstep i.
  Vec3 direction(int i) const;
};

enum class Phase
{
  SsL,
  DsR,
  SsR,
  DsL,
};

const char* to_string(Phase p);
Phase next_phase(Phase p);
bool is_single_support(Phase p);

struct FsmTiming
{
  double T_ss = 1.;
  double T_ds = 0.5;
};

/// SS(j) stands on footstep j; DS(j) stands on j-1 and j and ends on j. The
/// walk starts in DS(1) and ends in DS(n-1), which never expires.
struct FsmState
{
  Phase phase = Phase::DsR;
  /// Footstep the phase ends on.
  int step = 1;
  double t_rem = 0.;
  FsmTiming timing;
  /// Condition W extensions so far.
  int extensions = 0;

  bool single_support() const { return is_single_support(phase); }
  Stance stance() const { return single_support() ? Stance{step, 1} : Stance{step - 1, 2}; }
  bool final(const Walk& w) const { return !single_support() && step == w.size() - 1; }
};

/// Throws std::invalid_argument for fewer than 2 footsteps or feet that do
/// not alternate.
FsmState initial_state(const Walk& w, const FsmTiming& timing = {});

/// Stances of the phase after and two phases after the current one (clamped
/// at the final phase).
Stance next_stance(const Walk& w, const FsmState& s);
Stance next_next_stance(const Walk& w, const FsmState& s);

/// Condition W: the COM projects strictly inside the next single-support
/// static polygon.
bool condition_w_gate(const FsmState& s, const Vec3& com, const StaticPolygon& next_sp);

/// Moves to the next phase and resets t_rem to its duration.
void advance_phase(const Walk& w, FsmState& s);

enum class PreviewCase
{
  EndOfSingleSupport = 1,
  DoubleSupport = 2,
  SingleSupport = 3,
  Final = 4,
};

const char* to_string(PreviewCase c);

struct PreviewConfig
{
  int N = 10;
  double eps = 1e-3;
  double tube_radius = kDefaultTubeRadius;
  /// The tube starts this far behind the current COM along its axis.
  double tube_margin = 0.02;
  /// Terminal speed along the direction of progress, capped by the average
  /// speed needed to reach the target.
  double target_speed = 0.4;
};

/// Steps [begin, end) of the preview that share a stance and a tube.
struct PreviewPart
{
  int begin = 0;
  int end = 0;
  Stance stance;
  Tube tube;
};

struct PreviewInputs
{
  PreviewCase which = PreviewCase::SingleSupport;
  double T = 0.;
  double dt = 0.;
  Vec3 target = Vec3::Zero();
  Vec3 target_velocity = Vec3::Zero();
  /// Step index of the contact switch; N or more when none happens.
  int k_rem = 0;
  std::vector<PreviewPart> parts;
};

/// Horizon, target and tubes for the current phase and COM state.
/// With `support`, the static polygon of the single-support stance involved
/// in a contact switch, the switch point moves forward so that the
/// single-support tube covers the part of the path above that polygon.
PreviewInputs fsm_preview_inputs(const Walk& w, const FsmState& s, const ComState& x0,
                                 const PreviewConfig& config = {}, const StaticPolygon* support = nullptr);

}  // namespace cwc
