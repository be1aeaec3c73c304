#include "cwc/simulator.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cwc/lp.hpp"
#include "cwc/qp.hpp"

namespace cwc {

using nlohmann::json;

const char* to_string(Outcome o)
{
  switch (o) {
    case Outcome::Completed:
      return "completed";
    case Outcome::ForceInfeasible:
      return "force_infeasible";
    case Outcome::QpInfeasible:
      return "qp_infeasible";
    case Outcome::EmptySupport:
      return "empty_support";
    case Outcome::Timeout:
      return "timeout";
  }
  return "unknown";
}

ForceCheck validate_tick(const ContactSet& cs, double mass, const Vec3& p, const Vec3& u)
{
  ForceCheck out;
  const int n = cs.size();
  if (n == 0 || !(mass > 0.)) return out;
  std::vector<FrictionPyramid> pyramids;
  int rows = 0;
  for (const auto& c : cs.contacts) {
    pyramids.push_back(linearize_friction(c));
    rows += static_cast<int>(pyramids.back().halfspaces.rows());
  }

  // Mass-normalized: forces per kilogram.
  const Vec3 f = u - gravity_vector();
  Vec6 w;
  w << f, p.cross(f);
  LpProblem lp;
  lp.cost = Eigen::VectorXd::Zero(3 * n);
  lp.A_ub = Eigen::MatrixXd::Zero(rows, 3 * n);
  lp.b_ub = Eigen::VectorXd::Zero(rows);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    const auto& H = pyramids[i].halfspaces;
    lp.A_ub.block(r, 3 * i, H.rows(), 3) = H;
    r += static_cast<int>(H.rows());
  }
  lp.A_eq = grasp_matrix(cs);
  lp.b_eq = w;
  const LpResult res = lp_solve(lp);
  if (!res.optimal()) return out;
  out.feasible = true;
  out.residual = (lp.A_eq * res.x - w).norm();
  out.forces = mass * res.x;
  return out;
}

StanceCache::Entry& StanceCache::entry(const Stance& s)
{
  const auto key = std::make_pair(s.first, s.count);
  auto it = entries_.find(key);
  if (it == entries_.end()) it = entries_.emplace(key, Entry{compute_cwc(walk_.contacts(s)), std::nullopt}).first;
  return it->second;
}

const WrenchCone& StanceCache::cone(const Stance& s) { return entry(s).cone; }

const StaticPolygon& StanceCache::polygon(const Stance& s)
{
  Entry& e = entry(s);
  if (!e.polygon) e.polygon = static_polygon(e.cone);
  return *e.polygon;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Plan
{
  PreviewSolution solution;
  Eigen::MatrixXd first_cone;
  int raw_rows = 0;
  bool postponed = false;
  PreviewCase which = PreviewCase::DoubleSupport;
  double tube_radius = 0.;
};

constexpr int kShrinkRounds = 3;

// Cones for each part; false when one of them is empty.
bool reduce_cones(const std::vector<PreviewPart>& parts, StanceCache& cache, std::vector<TubeCone>& out)
{
  out.clear();
  for (const auto& part : parts) {
    out.push_back(tube_cone(cache.cone(part.stance), part.tube));
    if (!out.back().nonempty()) return false;
  }
  return true;
}

PreviewProblem make_problem(const PreviewInputs& in, const ComState& x0, const std::vector<TubeCone>& cones,
                            const PreviewConfig& c)
{
  PreviewProblem pp;
  pp.x0 = x0;
  pp.xT = {in.target, in.target_velocity};
  pp.N = c.N;
  pp.dt = in.dt;
  pp.eps = c.eps;
  for (size_t i = 0; i < in.parts.size(); ++i) {
    pp.segments.push_back({in.parts[i].begin, in.parts[i].end, cones[i].reduced, in.parts[i].tube.hrep});
  }
  return pp;
}

// Same horizon with the current stance throughout and the widest tube.
PreviewInputs postpone_switch(const PreviewInputs& in)
{
  PreviewInputs out = in;
  const PreviewPart* widest = &in.parts.front();
  for (const auto& p : in.parts) {
    if (p.stance.count > widest->stance.count) widest = &p;
  }
  out.parts = {{0, in.parts.back().end, in.parts.front().stance, widest->tube}};
  out.k_rem = out.parts.front().end;
  return out;
}

const StaticPolygon* switch_support(const Walk& w, const FsmState& fsm, StanceCache& cache)
{
  if (fsm.final(w)) return nullptr;
  return &cache.polygon(fsm.single_support() ? fsm.stance() : next_stance(w, fsm));
}

Plan plan_tick(const Walk& w, const FsmState& fsm, const ComState& x, const PreviewConfig& c, StanceCache& cache,
               StageTimes& times)
{
  Plan plan;
  auto attempt = [&](const PreviewInputs& inputs) {
    auto tc0 = Clock::now();
    std::vector<TubeCone> cones;
    const bool ok = reduce_cones(inputs.parts, cache, cones);
    times.cones += ms_since(tc0);
    if (!ok) return false;
    auto tq = Clock::now();
    plan.solution = solve_preview(make_problem(inputs, x, cones, c));
    times.qp += ms_since(tq);
    plan.first_cone = cones.front().reduced;
    plan.raw_rows = 0;
    for (const auto& tc : cones) plan.raw_rows += static_cast<int>(tc.raw.rows());
    return plan.solution.feasible();
  };

  // An empty cone or infeasible QP first shrinks the tube, then keeps the
  // current stance over the whole horizon.
  PreviewConfig shrunk = c;
  for (int round = 0; round < kShrinkRounds; ++round, shrunk.tube_radius *= 0.5) {
    auto t0 = Clock::now();
    const PreviewInputs in = fsm_preview_inputs(w, fsm, x, shrunk, switch_support(w, fsm, cache));
    times.fsm += ms_since(t0);
    plan.which = in.which;
    plan.tube_radius = shrunk.tube_radius;
    plan.postponed = false;
    if (attempt(in)) return plan;
    if (in.parts.size() > 1) {
      plan.postponed = true;
      if (attempt(postpone_switch(in))) return plan;
    }
  }
  plan.solution.status = QpStatus::Infeasible;
  return plan;
}

// Closest acceleration to `wanted` that the stance supports at p. Zero
// contact force (free fall) always qualifies, so this never fails.
Vec3 safe_fallback(const WrenchCone& cone, const Vec3& p, const Vec3& wanted)
{
  QpProblem qp;
  qp.H = Eigen::MatrixXd::Identity(3, 3);
  qp.f = -wanted;
  qp.A_ub = accel_rows(cone, p);
  qp.b_ub = qp.A_ub * gravity_vector();
  for (Eigen::Index i = 0; i < qp.A_ub.rows(); ++i) {
    const double n = qp.A_ub.row(i).norm();
    if (n > 0.) {
      qp.A_ub.row(i) /= n;
      qp.b_ub(i) /= n;
    }
  }
  const QpResult r = qp_solve(qp);
  return r.optimal() ? Vec3(r.x) : gravity_vector();
}

double nominal_duration(const Scenario& s)
{
  const int n = s.walk.size();
  return (n - 1) * s.timing.T_ds + (n - 2) * s.timing.T_ss;
}

}  // namespace

Trace run_simulation(const Scenario& s, const SimConfig& config)
{
  Trace trace;
  trace.scenario = s;
  trace.config = config;
  const Walk& w = s.walk;
  FsmState fsm = initial_state(w, s.timing);
  StanceCache cache(w);
  trace.final_target = w.final_target();

  const double dt = 1. / config.rate;
  const double max_time = config.max_time > 0. ? config.max_time : 3. * nominal_duration(s) + 5.;
  ComState x{0.5 * (w.steps[0].position + w.steps[1].position) + w.com_height * Vec3::UnitZ(), Vec3::Zero()};
  Vec3 last_u = Vec3::Zero();
  double qp_fail_time = 0.;
  bool phase_extended = false;

  for (int tick = 0;; ++tick) {
    const double t = tick * dt;
    if (t > max_time) {
      trace.outcome = Outcome::Timeout;
      trace.failure_tick = tick;
      trace.cause = "no arrival before " + std::to_string(max_time) + " s";
      break;
    }
    TickRecord rec;
    rec.t = t;
    rec.p = x.p;
    rec.v = x.v;
    rec.phase = fsm.phase;
    rec.stance = fsm.stance();

    const auto t_call = Clock::now();
    const Plan plan = plan_tick(w, fsm, x, config.preview, cache, rec.timing);
    const auto t_other = Clock::now();
    rec.which = plan.which;
    rec.qp_status = plan.solution.status;
    rec.postponed_switch = plan.postponed;
    rec.raw_cone_rows = plan.raw_rows;
    rec.cone_rows = plan.solution.cone_rows;
    rec.tube_radius = plan.tube_radius;
    Vec3 u;
    if (plan.solution.feasible()) {
      u = plan.solution.controls.u.front();
      rec.kkt_residual = plan.solution.kkt_residual;
      const Vec3 wrench = u - gravity_vector();
      rec.min_cone_slack = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < plan.first_cone.rows(); ++i) {
        rec.min_cone_slack = std::min(rec.min_cone_slack, -plan.first_cone.row(i).dot(wrench) / plan.first_cone.row(i).norm());
      }
      qp_fail_time = 0.;
    } else {
      u = safe_fallback(cache.cone(rec.stance), x.p, config.fallback_decay * last_u - x.v / s.timing.T_ds);
      rec.min_cone_slack = std::numeric_limits<double>::quiet_NaN();
      ++trace.qp_infeasible_ticks;
      qp_fail_time += dt;
    }
    rec.u = u;
    rec.timing.other += ms_since(t_other);
    rec.timing.total = ms_since(t_call);

    const auto t_val = Clock::now();
    const ForceCheck check = validate_tick(cache.contacts(rec.stance), config.mass, x.p, u);
    rec.timing.validate = ms_since(t_val);
    rec.force_feasible = check.feasible;

    // Phase bookkeeping; a failed QP holds the phase clock.
    if (plan.solution.feasible()) fsm.t_rem -= dt;
    if (fsm.t_rem <= 1e-9 && !fsm.final(w)) {
      if (fsm.single_support()) {
        advance_phase(w, fsm);
        phase_extended = false;
      } else if (condition_w_gate(fsm, x.p + dt * x.v + 0.5 * dt * dt * u, cache.polygon(next_stance(w, fsm)))) {
        advance_phase(w, fsm);
        phase_extended = false;
      } else {
        fsm.t_rem = 0.;
        rec.waiting = true;
        if (!phase_extended) {
          ++fsm.extensions;
          ++trace.extended_phases;
          phase_extended = true;
        }
      }
    }
    trace.ticks.push_back(rec);

    if (!check.feasible) {
      ++trace.force_infeasible_ticks;
      trace.outcome = Outcome::ForceInfeasible;
      trace.failure_tick = tick;
      trace.cause = "no feasible contact forces at t=" + std::to_string(t);
      break;
    }
    if (rec.waiting && !cache.polygon(next_stance(w, fsm)).region.nonempty()) {
      trace.outcome = Outcome::EmptySupport;
      trace.failure_tick = tick;
      trace.cause = "no static equilibrium on footstep " + std::to_string(next_stance(w, fsm).first);
      break;
    }
    if (qp_fail_time > s.timing.T_ds + 1e-9) {
      trace.outcome = Outcome::QpInfeasible;
      trace.failure_tick = tick;
      trace.cause = "preview QP infeasible for more than T_ds";
      break;
    }

    x = integrate(x, u, dt);
    last_u = u;
    if (fsm.final(w) && (x.p - trace.final_target).norm() < config.arrive_distance &&
        x.v.norm() < config.arrive_speed) {
      trace.outcome = Outcome::Completed;
      break;
    }
  }
  return trace;
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Vec3 vec_from(const json& j, const char* key, int line)
{
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != 3) throw ScenarioError(line, key, "expected an array of 3 numbers");
  return {(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>()};
}

template <typename E>
E enum_from(const json& j, const char* key, int line, std::initializer_list<E> values)
{
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw ScenarioError(line, key, "expected a string");
  for (E v : values) {
    if (it->get<std::string>() == to_string(v)) return v;
  }
  throw ScenarioError(line, key, "unknown value '" + it->get<std::string>() + "'");
}

constexpr const char* kTraceFormat = "cwcwalk-trace";

}  // namespace

void write_trace(std::ostream& out, const Trace& t, bool with_timing)
{
  std::ostringstream scen;
  write_scenario(scen, t.scenario);
  json scenario_lines = json::array();
  std::istringstream lines(scen.str());
  for (std::string l; std::getline(lines, l);) scenario_lines.push_back(json::parse(l));

  const auto& c = t.config;
  out << json{{"format", kTraceFormat},
              {"version", 1},
              {"scenario", scenario_lines},
              {"config",
               {{"N", c.preview.N},
                {"eps", c.preview.eps},
                {"tube_radius", c.preview.tube_radius},
                {"tube_margin", c.preview.tube_margin},
                {"target_speed", c.preview.target_speed},
                {"rate", c.rate},
                {"mass", c.mass}}}}
             .dump()
      << '\n';
  for (const auto& r : t.ticks) {
    json j{{"t", r.t},
           {"p", vec_json(r.p)},
           {"v", vec_json(r.v)},
           {"u", vec_json(r.u)},
           {"phase", to_string(r.phase)},
           {"stance", {r.stance.first, r.stance.count}},
           {"case", to_string(r.which)},
           {"qp_status", to_string(r.qp_status)},
           {"postponed_switch", r.postponed_switch},
           {"force_lp_status", r.force_feasible ? "feasible" : "infeasible"},
           {"min_cone_slack", number_or_null(r.min_cone_slack)},
           {"kkt_residual", r.kkt_residual},
           {"cone_rows", r.cone_rows},
           {"raw_cone_rows", r.raw_cone_rows},
           {"tube_radius", r.tube_radius},
           {"waiting", r.waiting}};
    if (with_timing) {
      j["timing_ms"] = {{"fsm", r.timing.fsm},
                        {"cones", r.timing.cones},
                        {"qp", r.timing.qp},
                        {"other", r.timing.other},
                        {"total", r.timing.total},
                        {"validate", r.timing.validate}};
    }
    out << j.dump() << '\n';
  }
  out << json{{"summary", true},
              {"outcome", to_string(t.outcome)},
              {"failure_tick", t.failure_tick},
              {"cause", t.cause},
              {"ticks", t.ticks.size()},
              {"extended_phases", t.extended_phases},
              {"qp_infeasible_ticks", t.qp_infeasible_ticks},
              {"force_infeasible_ticks", t.force_infeasible_ticks},
              {"final_target", vec_json(t.final_target)}}
             .dump()
      << '\n';
}

Trace read_trace(std::istream& in)
{
  Trace t;
  std::string text;
  int line = 0;
  bool have_header = false, have_summary = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ScenarioError(line, "", std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!have_header) {
        if (j.value("format", "") != kTraceFormat) throw ScenarioError(line, "format", "not a trace");
        std::stringstream scen;
        for (const auto& l : j.at("scenario")) scen << l.dump() << '\n';
        t.scenario = parse_scenario(scen);
        const auto& c = j.at("config");
        t.config.preview.N = c.at("N").get<int>();
        t.config.preview.eps = c.at("eps").get<double>();
        t.config.preview.tube_radius = c.at("tube_radius").get<double>();
        t.config.preview.tube_margin = c.at("tube_margin").get<double>();
        t.config.preview.target_speed = c.at("target_speed").get<double>();
        t.config.rate = c.at("rate").get<double>();
        t.config.mass = c.at("mass").get<double>();
        have_header = true;
        continue;
      }
      if (j.contains("summary")) {
        t.outcome = enum_from(j, "outcome", line,
                              {Outcome::Completed, Outcome::ForceInfeasible, Outcome::QpInfeasible, Outcome::EmptySupport,
                               Outcome::Timeout});
        t.failure_tick = j.at("failure_tick").get<int>();
        t.cause = j.at("cause").get<std::string>();
        t.extended_phases = j.at("extended_phases").get<int>();
        t.qp_infeasible_ticks = j.at("qp_infeasible_ticks").get<int>();
        t.force_infeasible_ticks = j.at("force_infeasible_ticks").get<int>();
        t.final_target = vec_from(j, "final_target", line);
        have_summary = true;
        continue;
      }
      TickRecord r;
      r.t = j.at("t").get<double>();
      r.p = vec_from(j, "p", line);
      r.v = vec_from(j, "v", line);
      r.u = vec_from(j, "u", line);
      r.phase = enum_from(j, "phase", line, {Phase::SsL, Phase::DsR, Phase::SsR, Phase::DsL});
      r.stance = {j.at("stance").at(0).get<int>(), j.at("stance").at(1).get<int>()};
      r.which = enum_from(j, "case", line,
                          {PreviewCase::EndOfSingleSupport, PreviewCase::DoubleSupport, PreviewCase::SingleSupport,
                           PreviewCase::Final});
      r.qp_status = enum_from(j, "qp_status", line, {QpStatus::Optimal, QpStatus::Infeasible, QpStatus::IterationLimit});
      r.postponed_switch = j.value("postponed_switch", false);
      const std::string force = j.at("force_lp_status").get<std::string>();
      if (force != "feasible" && force != "infeasible") throw ScenarioError(line, "force_lp_status", "unknown value");
      r.force_feasible = force == "feasible";
      const auto& slack = j.at("min_cone_slack");
      r.min_cone_slack = slack.is_null() ? std::numeric_limits<double>::quiet_NaN() : slack.get<double>();
      r.kkt_residual = j.value("kkt_residual", 0.);
      r.cone_rows = j.value("cone_rows", 0);
      r.raw_cone_rows = j.value("raw_cone_rows", 0);
      r.tube_radius = j.value("tube_radius", 0.);
      r.waiting = j.value("waiting", false);
      if (auto it = j.find("timing_ms"); it != j.end()) {
        r.timing.fsm = it->at("fsm").get<double>();
        r.timing.cones = it->at("cones").get<double>();
        r.timing.qp = it->at("qp").get<double>();
        r.timing.other = it->at("other").get<double>();
        r.timing.total = it->at("total").get<double>();
        r.timing.validate = it->at("validate").get<double>();
      }
      t.ticks.push_back(r);
    } catch (const json::exception& e) {
      throw ScenarioError(line, "", std::string("bad record: ") + e.what());
    }
  }
  if (!have_header) throw ScenarioError(line, "format", "empty trace");
  if (!have_summary) throw ScenarioError(line, "summary", "missing summary record");
  return t;
}

TraceCheck check_trace(const Trace& t)
{
  TraceCheck out;
  StanceCache cache(t.scenario.walk);
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& r : t.ticks) {
    if (!(r.t > prev)) out.monotone_time = false;
    prev = r.t;
    const bool ok = validate_tick(cache.contacts(r.stance), t.config.mass, r.p, r.u).feasible;
    if (!ok) {
      ++out.infeasible;
      if (out.first_infeasible < 0) out.first_infeasible = out.ticks;
    }
    ++out.ticks;
  }
  return out;
}

}  // namespace cwc
