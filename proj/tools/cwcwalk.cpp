#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cwc/bench.hpp"
#include "cwc/simulator.hpp"
#include "cwc/stability.hpp"

using namespace cwc;

namespace {

constexpr int kOk = 0;
constexpr int kDeclaredFailure = 2;
constexpr int kInputError = 3;

struct InputError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

Scenario read_scenario_file(const std::string& path)
{
  std::vector<std::string> warnings;
  Scenario s;
  try {
    s = load_scenario(path, &warnings);
  } catch (const ScenarioError& e) {
    throw InputError(path + ": " + e.what());
  }
  for (const auto& w : warnings) std::cerr << path << ": warning: " << w << '\n';
  return s;
}

// Writes to `path`, or stdout for "-".
template <class F>
void with_output(const std::string& path, F&& write)
{
  if (path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write(out);
}

nlohmann::json vertices_json(const std::vector<Vec2>& vs)
{
  nlohmann::json a = nlohmann::json::array();
  for (const auto& v : vs) a.push_back({v.x(), v.y()});
  return a;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Contact-wrench-cone regions and preview-controlled COM walking"};
  app.require_subcommand(1);

  SimConfig config;
  auto add_controller_flags = [&](CLI::App* cmd) {
    cmd->add_option("-N,--horizon", config.preview.N, "Preview steps")->check(CLI::PositiveNumber);
    cmd->add_option("--eps", config.preview.eps, "Control weight in the preview cost")->check(CLI::NonNegativeNumber);
    cmd->add_option("--radius", config.preview.tube_radius, "Tube half-width (m)")->check(CLI::PositiveNumber);
    cmd->add_option("--rate", config.rate, "Control rate (Hz)")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Simulate a scenario and write its trace");
  std::string scenario_path, trace_out = "-";
  bool timing = false;
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("-o,--out", trace_out, "Trace file ('-' for stdout)");
  run->add_option("--max-time", config.max_time, "Stop after this many seconds (0 = automatic)");
  run->add_flag("--timing", timing, "Include per-stage timings in the trace");
  add_controller_flags(run);

  auto* gen = app.add_subcommand("gen-staircase", "Generate a tilted circular staircase scenario");
  StaircaseOptions stairs;
  std::string gen_out = "-";
  gen->add_option("--seed", stairs.seed, "Random seed");
  gen->add_option("--steps", stairs.steps, "Number of footsteps")->check(CLI::Range(2, 100000));
  gen->add_option("--tilt", stairs.tilt_range, "Roll/pitch/yaw range (rad)")->check(CLI::NonNegativeNumber);
  gen->add_option("--stair-radius", stairs.radius, "Average staircase radius (m)")->check(CLI::PositiveNumber);
  gen->add_option("--height", stairs.height, "Altitude gain (m)");
  gen->add_option("--mu", stairs.mu, "Friction coefficient")->check(CLI::PositiveNumber);
  gen->add_option("-o,--out", gen_out, "Scenario file ('-' for stdout)");

  auto* regions = app.add_subcommand("regions", "Dump the static polygon and acceleration cone of a stance");
  std::string regions_path;
  int first = 0, count = 1;
  std::vector<double> com;
  regions->add_option("scenario", regions_path, "Scenario file")->required();
  regions->add_option("--first", first, "First footstep of the stance")->check(CLI::NonNegativeNumber);
  regions->add_option("--count", count, "Footsteps in the stance")->check(CLI::Range(1, 2));
  regions->add_option("--com", com, "COM position for the acceleration cone (default: above the stance)")
      ->expected(3);

  auto* bench = app.add_subcommand("bench", "Region and tube-cone benchmarks");
  BenchOptions bo;
  std::string bench_out;
  bench->add_option("--stances", bo.stances, "Random stances")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bo.seed, "Random seed");
  bench->add_option("--radius", bo.tube_radius, "Tube half-width (m)")->check(CLI::PositiveNumber);
  bench->add_option("--repeats", bo.repeats, "Timing repeats")->check(CLI::PositiveNumber);
  bench->add_option("--workers", bo.workers, "Threads for the random stances")->check(CLI::PositiveNumber);
  bench->add_option("--stair-seed", bo.staircase.seed, "Staircase seed for the double-support stances");
  bench->add_option("--stair-tilt", bo.staircase.tilt_range, "Staircase tilt range (rad)");
  bench->add_option("-o,--out", bench_out, "Machine-readable report (JSON lines)");

  auto* validate = app.add_subcommand("validate", "Re-check every tick of a trace with the force LP");
  std::string trace_in;
  validate->add_option("trace", trace_in, "Trace file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*run) {
      const Scenario s = read_scenario_file(scenario_path);
      const Trace t = run_simulation(s, config);
      with_output(trace_out, [&](std::ostream& o) { write_trace(o, t, timing); });
      std::cerr << s.name << ": " << to_string(t.outcome) << " after " << t.ticks.size() << " ticks";
      if (!t.completed()) std::cerr << " (tick " << t.failure_tick << ": " << t.cause << ")";
      std::cerr << ", " << t.extended_phases << " extended phases, " << t.qp_infeasible_ticks
                << " QP-infeasible ticks\n";
      return t.completed() ? kOk : kDeclaredFailure;
    }
    if (*gen) {
      const Scenario s = generate_staircase(stairs);
      with_output(gen_out, [&](std::ostream& o) { write_scenario(o, s); });
      return kOk;
    }
    if (*regions) {
      const Scenario s = read_scenario_file(regions_path);
      if (first + count > s.walk.size()) throw InputError("stance runs past the last footstep");
      const Stance stance{first, count};
      const ContactSet cs = s.walk.contacts(stance);
      const WrenchCone cone = compute_cwc(cs);
      const StaticPolygon sp = static_polygon(cone);
      Vec3 p = 0.5 * (s.walk.com_target(first) + s.walk.com_target(first + count - 1));
      if (!com.empty()) p = Vec3(com[0], com[1], com[2]);
      const AccelCone ac = accel_cone(cone, p);
      nlohmann::json rays = nlohmann::json::array();
      for (const auto& r : ac.rays) rays.push_back({r.x(), r.y(), r.z()});
      nlohmann::json out{
          {"stance", {first, count}},
          {"contacts", cs.size()},
          {"cwc_rows", cone.size()},
          {"static_polygon",
           {{"region", to_string(sp.region.kind)},
            {"vertices", vertices_json(sp.region.vertices)},
            {"area", sp.region.kind == RegionKind::Polygon ? polygon_area(sp.region.vertices) : 0.},
            {"chebyshev", {sp.chebyshev.x(), sp.chebyshev.y()}}}},
          {"accel_cone",
           {{"com", {p.x(), p.y(), p.z()}},
            {"status", to_string(ac.status)},
            {"apex", {ac.apex.x(), ac.apex.y(), ac.apex.z()}},
            {"rays", rays},
            {"section", vertices_json(ac.section.vertices)}}}};
      std::cout << out.dump(2) << '\n';
      return kOk;
    }
    if (*bench) {
      const BenchReport r = run_bench(bo);
      print_bench(std::cout, r);
      if (!bench_out.empty()) with_output(bench_out, [&](std::ostream& o) { write_bench(o, r); });
      return kOk;
    }
    if (*validate) {
      std::ifstream in(trace_in);
      if (!in) throw InputError("cannot read " + trace_in);
      Trace t;
      try {
        t = read_trace(in);
      } catch (const ScenarioError& e) {
        throw InputError(trace_in + ": " + e.what());
      }
      const TraceCheck c = check_trace(t);
      std::cout << c.ticks << " ticks, " << c.infeasible << " without feasible contact forces";
      if (c.first_infeasible >= 0) std::cout << " (first at tick " << c.first_infeasible << ")";
      std::cout << (c.monotone_time ? "" : ", time not monotone") << '\n';
      return c.infeasible == 0 && c.monotone_time ? kOk : kDeclaredFailure;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
