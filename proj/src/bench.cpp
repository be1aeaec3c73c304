#include "cwc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <Eigen/Geometry>
#include <json.hpp>

#include "cwc/stability.hpp"
#include "cwc/tube.hpp"

namespace cwc {

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double min_ms(int repeats, F&& f)
{
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(repeats, 1); ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

double region_distance(const Region2d& a, const Region2d& b)
{
  if (a.kind != b.kind) return std::numeric_limits<double>::infinity();
  if (a.kind == RegionKind::Empty || a.kind == RegionKind::Unbounded) return 0.;
  return hausdorff_distance(a.vertices, b.vertices);
}

StanceBench bench_stance(const ContactSet& cs, int contacts, const BenchOptions& o)
{
  StanceBench b;
  b.contacts = contacts;
  StaticPolygon sp;
  b.hull_ms = min_ms(o.repeats, [&] { sp = static_polygon(compute_cwc(cs)); });
  BretlLallOptions bo;
  bo.area_tol = o.oracle_area_tol;
  BretlLallResult bl;
  b.oracle_ms = min_ms(o.repeats, [&] { bl = bretl_lall_polygon(cs, 1., bo); });
  b.hull_kind = sp.region.kind;
  b.oracle_kind = bl.region.kind;
  b.oracle_queries = bl.lp_queries;
  b.hausdorff = region_distance(sp.region, bl.region);
  return b;
}

DoubleSupportBench bench_double_support(const Walk& w, int j, const BenchOptions& o, std::mt19937& rng)
{
  DoubleSupportBench b;
  b.step = j;
  const ContactSet cs = w.contacts({j, 2});
  const WrenchCone cone = compute_cwc(cs);
  b.cwc_rows = cone.size();
  const Vec3 a = w.com_target(j), c = w.com_target(j + 1);
  const TubeCone tc = tube_cone(cone, build_tube(a, c, o.tube_radius));
  b.raw_rows = static_cast<int>(tc.raw.rows());
  b.reduced_rows = static_cast<int>(tc.reduced.rows());
  b.cone_empty = !tc.nonempty();

  std::uniform_real_distribution<double> s(0., 1.), jitter(-o.tube_radius, o.tube_radius);
  std::vector<Vec3> points;
  for (int k = 0; k < o.positions; ++k) points.push_back(a + s(rng) * (c - a) + Vec3(jitter(rng), jitter(rng), 0.));
  const double n = std::max<int>(o.positions, 1);
  b.hull_only_ms = min_ms(o.repeats, [&] {
                     for (const Vec3& p : points) accel_cone(cone, p);
                   }) / n;
  b.full_ms = min_ms(o.repeats, [&] {
                for (const Vec3& p : points) accel_cone(compute_cwc(cs), p);
              }) / n;
  return b;
}

const char* kind_name(RegionKind k) { return to_string(k); }

nlohmann::json to_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}, {"count", m.count}}; }

}  // namespace

MeanStd mean_std(const std::vector<double>& xs)
{
  MeanStd m;
  m.count = static_cast<int>(xs.size());
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x / xs.size();
  for (double x : xs) m.std += (x - m.mean) * (x - m.mean) / xs.size();
  m.std = std::sqrt(m.std);
  return m;
}

ContactSet random_stance(std::mt19937& rng, int contacts, double max_tilt, double mu)
{
  std::uniform_real_distribution<double> pos(-0.4, 0.4), height(-0.1, 0.3), tilt(-max_tilt, max_tilt),
      yaw(-M_PI, M_PI), len(0.1, 0.25), wid(0.06, 0.14);
  ContactSet cs;
  for (int i = 0; i < contacts; ++i) {
    const Vec3 c(pos(rng), pos(rng), height(rng));
    const double roll = tilt(rng), pitch = tilt(rng), psi = yaw(rng);
    const Mat3 R = (Eigen::AngleAxisd(psi, Vec3::UnitZ()) * Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                    Eigen::AngleAxisd(roll, Vec3::UnitX()))
                       .toRotationMatrix();
    const double l = len(rng), wd = wid(rng);
    cs = merge(cs, rectangle_contacts(c, R, l, wd, mu));
  }
  return cs;
}

BenchReport run_bench(const BenchOptions& options)
{
  BenchReport r;
  r.options = options;

  // Stances are drawn up front so the set does not depend on the worker count.
  std::mt19937 rng(options.seed);
  std::vector<ContactSet> stances;
  for (int i = 0; i < options.stances; ++i) stances.push_back(random_stance(rng, 1 + i % 3, options.max_tilt, options.mu));
  r.stances.resize(stances.size());
  const int workers = std::clamp(options.workers, 1, std::max(options.stances, 1));
  auto work = [&](int first) {
    for (size_t i = first; i < stances.size(); i += workers) r.stances[i] = bench_stance(stances[i], 1 + i % 3, options);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < workers; ++k) pool.emplace_back(work, k);
    for (auto& t : pool) t.join();
  }

  const Walk w = generate_staircase(options.staircase).walk;
  std::mt19937 pos_rng(options.seed + 1);
  for (int j = 0; j + 1 < w.size(); ++j) r.double_support.push_back(bench_double_support(w, j, options, pos_rng));
  return r;
}

BenchSummary BenchReport::summary() const
{
  BenchSummary s;
  std::vector<double> hull, oracle;
  for (const auto& b : stances) {
    hull.push_back(b.hull_ms);
    oracle.push_back(b.oracle_ms);
    if (b.hull_kind != b.oracle_kind) ++s.kind_mismatches;
    s.max_hausdorff = std::max(s.max_hausdorff, b.hausdorff);
  }
  s.hull_ms = mean_std(hull);
  s.oracle_ms = mean_std(oracle);
  if (s.hull_ms.mean > 0.) s.oracle_over_hull = s.oracle_ms.mean / s.hull_ms.mean;

  std::vector<double> hull_only, full, raw, reduced;
  for (const auto& b : double_support) {
    hull_only.push_back(b.hull_only_ms);
    full.push_back(b.full_ms);
    if (b.cone_empty) {
      ++s.empty_cones;
      continue;
    }
    raw.push_back(b.raw_rows);
    reduced.push_back(b.reduced_rows);
    if (b.raw_rows > 0) s.max_reduction = std::max(s.max_reduction, double(b.reduced_rows) / b.raw_rows);
  }
  s.hull_only_ms = mean_std(hull_only);
  s.full_ms = mean_std(full);
  if (s.hull_only_ms.mean > 0.) s.full_over_hull_only = s.full_ms.mean / s.hull_only_ms.mean;
  s.raw_rows = mean_std(raw);
  s.reduced_rows = mean_std(reduced);
  return s;
}

void write_bench(std::ostream& out, const BenchReport& r)
{
  using nlohmann::json;
  const BenchOptions& o = r.options;
  out << json{{"format", "cwcwalk-bench"},
              {"version", 1},
              {"stances", o.stances},
              {"seed", o.seed},
              {"max_tilt", o.max_tilt},
              {"mu", o.mu},
              {"staircase_seed", o.staircase.seed},
              {"staircase_steps", o.staircase.steps},
              {"staircase_tilt", o.staircase.tilt_range},
              {"tube_radius", o.tube_radius},
              {"positions", o.positions},
              {"repeats", o.repeats}}
             .dump()
      << '\n';
  for (const auto& b : r.stances) {
    out << json{{"kind", "polygon"},
                {"contacts", b.contacts},
                {"hull_region", kind_name(b.hull_kind)},
                {"oracle_region", kind_name(b.oracle_kind)},
                {"hull_ms", b.hull_ms},
                {"oracle_ms", b.oracle_ms},
                {"oracle_queries", b.oracle_queries},
                {"hausdorff", std::isfinite(b.hausdorff) ? json(b.hausdorff) : json(nullptr)}}
               .dump()
        << '\n';
  }
  for (const auto& b : r.double_support) {
    out << json{{"kind", "double_support"},
                {"step", b.step},
                {"cwc_rows", b.cwc_rows},
                {"raw_rows", b.raw_rows},
                {"reduced_rows", b.reduced_rows},
                {"cone_empty", b.cone_empty},
                {"hull_only_ms", b.hull_only_ms},
                {"full_ms", b.full_ms}}
               .dump()
        << '\n';
  }
  const BenchSummary s = r.summary();
  out << json{{"summary",
               {{"hull_ms", to_json(s.hull_ms)},
                {"oracle_ms", to_json(s.oracle_ms)},
                {"oracle_over_hull", s.oracle_over_hull},
                {"max_hausdorff", std::isfinite(s.max_hausdorff) ? json(s.max_hausdorff) : json(nullptr)},
                {"kind_mismatches", s.kind_mismatches},
                {"hull_only_ms", to_json(s.hull_only_ms)},
                {"full_ms", to_json(s.full_ms)},
                {"full_over_hull_only", s.full_over_hull_only},
                {"raw_rows", to_json(s.raw_rows)},
                {"reduced_rows", to_json(s.reduced_rows)},
                {"max_reduction", s.max_reduction},
                {"empty_cones", s.empty_cones}}}}
             .dump()
      << '\n';
}

void print_bench(std::ostream& out, const BenchReport& r)
{
  const BenchSummary s = r.summary();
  auto ms = [&](const MeanStd& m) {
    std::ostringstream o;
    o << std::fixed << std::setprecision(3) << m.mean << " +- " << m.std;
    return o.str();
  };
  out << std::left;
  out << "static-equilibrium polygon, " << s.hull_ms.count << " random stances\n";
  out << "  " << std::setw(26) << "hull (ms)" << ms(s.hull_ms) << '\n';
  out << "  " << std::setw(26) << "Bretl-Lall (ms)" << ms(s.oracle_ms) << '\n';
  out << "  " << std::setw(26) << "ratio" << std::setprecision(2) << std::fixed << s.oracle_over_hull << "x\n";
  out << "  " << std::setw(26) << "max Hausdorff (m)" << std::scientific << std::setprecision(2)
      << s.max_hausdorff << '\n';
  out << "  " << std::setw(26) << "region kind mismatches" << s.kind_mismatches << '\n';
  out << "double support, " << s.hull_only_ms.count << " staircase stances\n";
  out << "  " << std::setw(26) << "hull only (ms/position)" << ms(s.hull_only_ms) << '\n';
  out << "  " << std::setw(26) << "full (ms/position)" << ms(s.full_ms) << '\n';
  out << "  " << std::setw(26) << "ratio" << std::setprecision(2) << std::fixed << s.full_over_hull_only << "x\n";
  out << "  " << std::setw(26) << "|C_T| rows" << std::setprecision(1) << s.raw_rows.mean << " +- " << s.raw_rows.std
      << '\n';
  out << "  " << std::setw(26) << "|C'_T| rows" << s.reduced_rows.mean << " +- " << s.reduced_rows.std << '\n';
  out << "  " << std::setw(26) << "max |C'_T|/|C_T|" << std::setprecision(4) << s.max_reduction << '\n';
  out << "  " << std::setw(26) << "empty tube cones" << s.empty_cones << '\n';
}

}  // namespace cwc
