#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwc/fsm.hpp"
#include "cwc/scenario.hpp"

namespace cwc {

/// Ground-truth check: contact forces inside every friction pyramid whose
/// net wrench at the origin equals (f, p x f) with f = m (u - g).
struct ForceCheck
{
  bool feasible = false;
  /// Witness forces, 3 per contact (N); empty when infeasible.
  Eigen::VectorXd forces;
  /// |G f - w| / m of the witness.
  double residual = 0.;
};

ForceCheck validate_tick(const ContactSet& cs, double mass, const Vec3& p, const Vec3& u);

struct SimConfig
{
  PreviewConfig preview;
  /// Control rate (Hz).
  double rate = 100.;
  double mass = 38.;
  /// Arrival: COM within this of the final target...
  double arrive_distance = 0.02;
  /// ...and slower than this.
  double arrive_speed = 0.05;
  /// Multiplier applied to the last control when the QP fails; the result is
  /// then projected onto the acceleration cone of the current stance.
  double fallback_decay = 0.5;
  /// Hard stop (s); 0 picks three times the nominal walk duration plus 5 s.
  double max_time = 0.;
};

enum class Outcome
{
  Completed,
  ForceInfeasible,
  QpInfeasible,
  /// The next stance admits no static equilibrium, so condition W can never hold.
  EmptySupport,
  Timeout,
};

const char* to_string(Outcome o);

/// Wall time of each controller stage for one tick (ms).
struct StageTimes
{
  /// Preview inputs, tubes included.
  double fsm = 0.;
  /// Cone lookup and tube-cone reduction.
  double cones = 0.;
  /// QP assembly and solve.
  double qp = 0.;
  /// Fallback logic, integration and phase bookkeeping.
  double other = 0.;
  /// Whole controller call, measured separately.
  double total = 0.;
  /// Ground-truth force LP (outside the controller).
  double validate = 0.;

  double stages() const { return fsm + cones + qp + other; }
};

struct TickRecord
{
  double t = 0.;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 u = Vec3::Zero();
  Phase phase = Phase::DsR;
  Stance stance;
  PreviewCase which = PreviewCase::DoubleSupport;
  QpStatus qp_status = QpStatus::Optimal;
  /// The controller postponed the contact switch inside the preview.
  bool postponed_switch = false;
  bool force_feasible = false;
  double min_cone_slack = 0.;
  double kkt_residual = 0.;
  int cone_rows = 0;
  int raw_cone_rows = 0;
  /// Radius of the tubes actually used (shrunk when the nominal ones fail).
  double tube_radius = 0.;
  /// Condition W held the phase at this tick.
  bool waiting = false;
  StageTimes timing;
};

struct Trace
{
  Scenario scenario;
  SimConfig config;
  std::vector<TickRecord> ticks;
  Outcome outcome = Outcome::Timeout;
  /// Index of the failing tick, -1 on success.
  int failure_tick = -1;
  std::string cause;
  /// Double-support phases extended by condition W.
  int extended_phases = 0;
  int qp_infeasible_ticks = 0;
  int force_infeasible_ticks = 0;
  Vec3 final_target = Vec3::Zero();

  bool completed() const { return outcome == Outcome::Completed; }
};

/// Cone and static polygon per stance, computed once.
class StanceCache
{
public:
  explicit StanceCache(const Walk& w) : walk_(w) {}

  const WrenchCone& cone(const Stance& s);
  const StaticPolygon& polygon(const Stance& s);
  ContactSet contacts(const Stance& s) const { return walk_.contacts(s); }

private:
  struct Entry
  {
    WrenchCone cone;
    std::optional<StaticPolygon> polygon;
  };
  Entry& entry(const Stance& s);

  const Walk& walk_;
  std::map<std::pair<int, int>, Entry> entries_;
};

/// Full loop: FSM inputs, tubes, tube cones, preview QP, apply u(0),
/// integrate, check forces. Stops on arrival or a declared failure.
Trace run_simulation(const Scenario& s, const SimConfig& config = {});

/// JSON lines: a header carrying scenario and config, one record per tick,
/// and a closing summary. Without timings the output is reproducible byte
/// for byte.
void write_trace(std::ostream& out, const Trace& t, bool with_timing = true);
/// Throws ScenarioError on malformed input.
Trace read_trace(std::istream& in);

struct TraceCheck
{
  int ticks = 0;
  int infeasible = 0;
  int first_infeasible = -1;
  bool monotone_time = true;
};

/// Re-runs the force check on every recorded tick.
TraceCheck check_trace(const Trace& t);

}  // namespace cwc
