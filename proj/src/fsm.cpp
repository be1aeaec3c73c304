#include "cwc/fsm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace cwc {

const char* to_string(Foot f) { return f == Foot::Left ? "L" : "R"; }

const char* to_string(Phase p)
{
  switch (p) {
    case Phase::SsL:
      return "SS-L";
    case Phase::DsR:
      return "DS-R";
    case Phase::SsR:
      return "SS-R";
    case Phase::DsL:
      return "DS-L";
  }
  return "unknown";
}

Phase next_phase(Phase p)
{
  switch (p) {
    case Phase::SsL:
      return Phase::DsR;
    case Phase::DsR:
      return Phase::SsR;
    case Phase::SsR:
      return Phase::DsL;
    case Phase::DsL:
      return Phase::SsL;
  }
  return Phase::SsL;
}

bool is_single_support(Phase p) { return p == Phase::SsL || p == Phase::SsR; }

const char* to_string(PreviewCase c)
{
  switch (c) {
    case PreviewCase::EndOfSingleSupport:
      return "end_of_single_support";
    case PreviewCase::DoubleSupport:
      return "double_support";
    case PreviewCase::SingleSupport:
      return "single_support";
    case PreviewCase::Final:
      return "final";
  }
  return "unknown";
}

ContactSet Walk::contacts(const Stance& s) const
{
  ContactSet cs;
  for (int i = s.first; i < s.first + s.count; ++i) {
    const Footstep& f = steps.at(i);
    cs = merge(cs, rectangle_contacts(f.position, f.rotation, f.length, f.width, mu, friction_edges));
  }
  return cs;
}

Vec3 Walk::com_target(int i) const { return steps.at(i).position + com_height * Vec3::UnitZ(); }

Vec3 Walk::final_target() const
{
  const int n = size();
  return 0.5 * (steps.at(n - 2).position + steps.at(n - 1).position) + com_height * Vec3::UnitZ();
}

Vec3 Walk::direction(int i) const
{
  const int n = size();
  auto mid = [&](int a) {
    a = std::clamp(a, 0, n - 2);
    return 0.5 * (steps[a].position + steps[a + 1].position);
  };
  Vec3 d = mid(i) - mid(i - 1);
  if (d.norm() < 1e-9) d = steps[n - 1].position - steps[0].position;
  return d.norm() < 1e-9 ? Vec3::Zero() : Vec3(d.normalized());
}

FsmState initial_state(const Walk& w, const FsmTiming& timing)
{
  if (w.size() < 2) throw std::invalid_argument("walk needs at least two footsteps");
  for (int i = 1; i < w.size(); ++i) {
    if (w.steps[i].foot == w.steps[i - 1].foot) throw std::invalid_argument("footsteps must alternate feet");
  }
  FsmState s;
  s.step = 1;
  s.phase = w.steps[1].foot == Foot::Right ? Phase::DsR : Phase::DsL;
  s.timing = timing;
  s.t_rem = timing.T_ds;
  return s;
}

Stance next_stance(const Walk& w, const FsmState& s)
{
  if (s.final(w)) return s.stance();
  return s.single_support() ? Stance{s.step, 2} : Stance{s.step, 1};
}

Stance next_next_stance(const Walk& w, const FsmState& s)
{
  if (s.final(w)) return s.stance();
  if (s.single_support()) return s.step + 1 == w.size() - 1 ? Stance{s.step, 2} : Stance{s.step + 1, 1};
  return Stance{s.step, 2};
}

bool condition_w_gate(const FsmState&, const Vec3& com, const StaticPolygon& next_sp)
{
  return strictly_inside(next_sp, com.head<2>());
}

void advance_phase(const Walk& w, FsmState& s)
{
  if (s.final(w)) return;
  if (s.single_support()) ++s.step;
  s.phase = next_phase(s.phase);
  s.t_rem = s.single_support() ? s.timing.T_ss : s.timing.T_ds;
}

namespace {

// Tube from p0 (pulled back by the margin) to `to`, squares perpendicular to
// `axis`.
Tube leading_tube(const Vec3& p0, const Vec3& to, const Vec3& axis, const PreviewConfig& c)
{
  return build_tube(p0 - c.tube_margin * axis.normalized(), to, c.tube_radius, axis);
}

// Parameter range [lo, hi] of a + s d, s in [0, len], strictly inside sp
// (xy only); empty when lo > hi.
std::pair<double, double> inside_range(const StaticPolygon& sp, const Vec3& a, const Vec3& d, double len)
{
  double lo = 0., hi = len;
  for (Eigen::Index i = 0; i < sp.planar.rows() && lo <= hi; ++i) {
    const double slope = sp.planar.row(i).dot(d.head<2>());
    const double gap = sp.offset(i) - sp.planar.row(i).dot(a.head<2>());
    if (std::abs(slope) < 1e-12) {
      if (gap <= 0.) return {1., 0.};
    } else if (slope > 0.) {
      hi = std::min(hi, gap / slope);
    } else {
      lo = std::max(lo, gap / slope);
    }
  }
  return {lo, hi};
}

}  // namespace

PreviewInputs fsm_preview_inputs(const Walk& w, const FsmState& s, const ComState& x0, const PreviewConfig& c,
                                 const StaticPolygon* support)
{
  PreviewInputs in;
  const int N = c.N;
  const double t = std::max(s.t_rem, 0.);
  const double half_ss = 0.5 * s.timing.T_ss;
  const int last = w.size() - 1;

  Stance first = s.stance(), second = first;
  if (s.final(w)) {
    in.which = PreviewCase::Final;
    in.T = t + half_ss;
    in.target = w.final_target();
  } else if (s.single_support() && t < half_ss) {
    in.which = PreviewCase::EndOfSingleSupport;
    in.T = t + s.timing.T_ds + half_ss;
    const int j = s.step + 1;
    in.target = j == last ? w.final_target() : w.com_target(j);
    if (j != last) in.target_velocity = c.target_speed * w.direction(j);
    second = Stance{s.step, 2};
  } else if (!s.single_support()) {
    in.which = PreviewCase::DoubleSupport;
    in.T = t + half_ss;
    in.target = w.com_target(s.step);
    in.target_velocity = c.target_speed * w.direction(s.step);
    second = Stance{s.step, 1};
  } else {
    in.which = PreviewCase::SingleSupport;
    in.T = t;
    in.target = w.com_target(s.step);
    in.target_velocity = c.target_speed * w.direction(s.step);
  }
  in.dt = in.T / N;
  // Never ask for more speed than the average needed to reach the target.
  const double reach = (in.target - x0.p).norm() / std::max(in.T, 1e-9);
  if (in.target_velocity.norm() > reach) in.target_velocity *= reach / in.target_velocity.norm();
  in.k_rem = in.which == PreviewCase::Final || in.which == PreviewCase::SingleSupport
                 ? N
                 : static_cast<int>(std::floor(t / in.dt));

  const Vec3 p0 = x0.p;
  const Vec3 axis = (in.target - p0).norm() < 1e-9 ? Vec3(Vec3::UnitX()) : Vec3(in.target - p0);
  const int split = std::min(in.k_rem + 1, N);
  if (split >= N) {
    in.parts.push_back({0, N, first, leading_tube(p0, in.target, axis, c)});
    return in;
  }
  // Where the COM gets by the switch at its current speed along the axis,
  // clamped to the segment.
  const double dist = (in.target - p0).norm();
  double along = std::clamp(x0.v.dot(axis.normalized()) * split * in.dt, 0., dist);
  if (support) {
    // Keep the single-support tube over its foot: up to the exit point in
    // case 1, from the entry point in case 2.
    const auto [lo, hi] = inside_range(*support, p0, axis.normalized(), dist);
    if (lo <= hi) {
      along = std::max(along, in.which == PreviewCase::EndOfSingleSupport ? hi : lo);
    }
    along = std::clamp(along, 0., dist);
  }
  const Vec3 p_sw = p0 + along * axis.normalized();
  if (in.which == PreviewCase::EndOfSingleSupport) {
    const Tube ss = leading_tube(p0, p_sw, axis, c);
    in.parts.push_back({0, split, first, ss});
    in.parts.push_back({split, N, second, extend_tube(ss, in.target, axis)});
  } else {
    const Tube ss = build_tube(p_sw, in.target, c.tube_radius, axis);
    in.parts.push_back({0, split, first, extend_tube(ss, p0 - c.tube_margin * axis.normalized(), axis)});
    in.parts.push_back({split, N, second, ss});
  }
  return in;
}

}  // namespace cwc
