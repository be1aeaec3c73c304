// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cwc/bench.hpp"
#include "cwc/double_description.hpp"
#include "cwc/simulator.hpp"
#include "cwc/stability.hpp"
#include "cwc/tube.hpp"
#include "oracles.hpp"

using namespace cwc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail)
{
  std::printf("%s criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

// Force existence LP on the pyramid rays with the equality matrix built once
// per stance; only the target wrench changes between queries.
class ForceOracle
{
public:
  explicit ForceOracle(const ContactSet& cs)
  {
    std::vector<Vec3> rays;
    std::vector<int> owner;
    for (int i = 0; i < cs.size(); ++i) {
      for (const auto& r : linearize_friction(cs.contacts[i]).rays) {
        rays.push_back(r);
        owner.push_back(i);
      }
    }
    const int nr = static_cast<int>(rays.size());
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(3 * cs.size(), nr);
    for (int k = 0; k < nr; ++k) E.block<3, 1>(3 * owner[k], k) = rays[k];
    lp_.cost = Eigen::VectorXd::Zero(nr);
    lp_.A_eq = grasp_matrix(cs) * E;
    lp_.A_ub.resize(0, nr);
    lp_.b_ub.resize(0);
    lp_.nonneg.assign(nr, true);
  }

  bool feasible(const Vec3& p, const Vec3& pdd)
  {
    const Vec3 f = pdd - gravity_vector();
    lp_.b_eq.resize(6);
    lp_.b_eq << f, p.cross(f);
    return lp_solve(lp_).optimal();
  }

private:
  LpProblem lp_;
};

std::vector<ContactSet> stances_with_polygons(std::mt19937& rng, int count, double max_tilt)
{
  std::vector<ContactSet> out;
  for (int i = 0; static_cast<int>(out.size()) < count; ++i) {
    const ContactSet cs = random_stance(rng, 1 + i % 3, max_tilt, 0.7);
    const StaticPolygon sp = static_polygon(compute_cwc(cs));
    if (sp.region.kind == RegionKind::Polygon && polygon_area(sp.region.vertices) > 1e-3) out.push_back(cs);
  }
  return out;
}

Vec3 random_point_in(const Tube& t, std::mt19937& rng)
{
  std::exponential_distribution<double> e(1.);
  Vec3 p = Vec3::Zero();
  double total = 0.;
  for (const auto& v : t.vertices) {
    const double w = e(rng);
    p += w * v;
    total += w;
  }
  return p / total;
}

// Nonnegative combination of the tube cone rays from the apex.
Vec3 random_accel_in(const TubeCone& tc, std::mt19937& rng)
{
  std::exponential_distribution<double> e(1.);
  std::uniform_real_distribution<double> scale(0.01, 5.);
  Vec3 dir = Vec3::Zero();
  double total = 0.;
  for (const auto& r : tc.rays) {
    const double w = e(rng);
    dir += w * r;
    total += w;
  }
  return gravity_vector() + scale(rng) * dir / total;
}

// Interval of x with (x, y) in the polygon; empty when first > second.
std::pair<double, double> slice(const StaticPolygon& sp, double y)
{
  double xl = -std::numeric_limits<double>::infinity(), xr = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < sp.planar.rows(); ++i) {
    const double a = sp.planar(i, 0), rhs = sp.offset(i) - sp.planar(i, 1) * y;
    if (std::abs(a) < 1e-12) {
      if (rhs < 0.) return {1., 0.};
    } else if (a > 0.) {
      xr = std::min(xr, rhs / a);
    } else {
      xl = std::max(xl, rhs / a);
    }
  }
  return {xl, xr};
}

void region_oracle(const BenchReport& bench)
{
  const BenchSummary s = bench.summary();
  const bool hull_ok = bench.stances.size() >= 100 && s.kind_mismatches == 0 && s.max_hausdorff < 1e-4;

  // Grid oracle: rows 1 mm apart, each row's feasible interval bisected to
  // 1 mm by force-existence LPs, compared with the polygon's slice.
  std::mt19937 rng(101);
  const auto grid_stances = stances_with_polygons(rng, 10, 0.5);
  constexpr double step = 1e-3;
  double worst_end = 0.;
  int rows = 0, unmatched = 0;
  for (const auto& cs : grid_stances) {
    const StaticPolygon sp = static_polygon(compute_cwc(cs));
    Vec2 lo = sp.region.vertices.front(), hi = lo;
    for (const auto& v : sp.region.vertices) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const Vec2 pad(0.005, 0.005);
    const auto grid = oracles::lp_grid_polygon(cs, lo - pad, hi + pad, step);
    std::vector<double> seen;
    for (size_t k = 0; k + 1 < grid.size(); k += 2) {
      const double y = grid[k].y();
      seen.push_back(y);
      const auto [xl, xr] = slice(sp, y);
      ++rows;
      if (xl > xr) {
        ++unmatched;
        continue;
      }
      worst_end = std::max({worst_end, std::abs(grid[k].x() - xl), std::abs(grid[k + 1].x() - xr)});
    }
    // Rows the LP scan skipped must be too thin for its coarse bracket.
    for (double y = lo.y() - pad.y(); y <= hi.y() + pad.y() + 1e-12; y += step) {
      const auto [xl, xr] = slice(sp, y);
      const bool found = std::any_of(seen.begin(), seen.end(), [&](double s) { return std::abs(s - y) < 1e-12; });
      if (!found && xr - xl > 10. * step) ++unmatched;
    }
  }
  const bool grid_ok = unmatched == 0 && worst_end <= step + 1e-9;
  report(1, "region-oracle equivalence", hull_ok && grid_ok,
         fmt::format("{} stances, {} region-kind mismatches, max Hausdorff to Bretl-Lall {:.2e} m (< 1e-4); "
                     "1 mm LP grid on {} stances: {} rows, {} unmatched, max interval-end error {:.2e} m (<= 1e-3)",
                     bench.stances.size(), s.kind_mismatches, s.max_hausdorff, grid_stances.size(), rows, unmatched,
                     worst_end));
}

void mass_invariance()
{
  std::mt19937 rng(102);
  double worst = 0., worst_lp = 0.;
  int compared = 0;
  bool same_shape = true;
  for (int i = 0; i < 60; ++i) {
    const ContactSet cs = random_stance(rng, 1 + i % 3, 0.5, 0.7);
    const WrenchCone cone = compute_cwc(cs);
    const StaticPolygon ref = static_polygon(cone, 1.);
    const BretlLallResult ref_lp = bretl_lall_polygon(cs, 1.);
    for (double m : {38., 100.}) {
      const StaticPolygon sp = static_polygon(cone, m);
      const BretlLallResult lp = bretl_lall_polygon(cs, m);
      if (sp.region.kind != ref.region.kind || sp.region.vertices.size() != ref.region.vertices.size() ||
          lp.region.kind != ref_lp.region.kind || lp.region.vertices.size() != ref_lp.region.vertices.size()) {
        same_shape = false;
        continue;
      }
      for (size_t k = 0; k < sp.region.vertices.size(); ++k) {
        worst = std::max(worst, (sp.region.vertices[k] - ref.region.vertices[k]).norm());
      }
      for (size_t k = 0; k < lp.region.vertices.size(); ++k) {
        worst_lp = std::max(worst_lp, (lp.region.vertices[k] - ref_lp.region.vertices[k]).norm());
      }
    }
    compared += ref.region.kind == RegionKind::Polygon;
  }
  report(2, "mass invariance", same_shape && worst < 1e-9 && worst_lp < 1e-9,
         fmt::format("60 stances ({} with polygons), m in {{1, 38, 100}} kg: max vertex shift {:.2e} m for the hull "
                     "polygon, {:.2e} m for the force-LP projection (< 1e-9)",
                     compared, worst, worst_lp));
}

void proposition_one()
{
  std::mt19937 rng(103);
  std::uniform_real_distribution<double> u(-0.6, 0.6), z(0.6, 1.0);
  const auto stances = stances_with_polygons(rng, 10, 0.5);
  int inside = 0, outside = 0, wrong = 0, skipped = 0;
  for (const auto& cs : stances) {
    const WrenchCone cone = compute_cwc(cs);
    const StaticPolygon sp = static_polygon(cone);
    for (int s = 0; s < 1000; ++s) {
      const Vec3 p(sp.chebyshev.x() + u(rng), sp.chebyshev.y() + u(rng), z(rng));
      const double margin =
          slackness(sp, p.head<2>()).cwiseQuotient(sp.planar.rowwise().norm()).minCoeff();
      if (std::abs(margin) < 1e-9) {
        ++skipped;
        continue;
      }
      // Zero acceleration against the full row set and against the minimal cone.
      const Eigen::MatrixXd rows = accel_rows(cone, p);
      const double zero_slack = (rows * gravity_vector()).cwiseQuotient(rows.rowwise().norm()).minCoeff();
      const AccelCone ac = accel_cone(cone, p);
      const bool zero_interior = zero_slack > 0. && ac.status == ConeStatus::Centered && ac.contains(Vec3::Zero());
      if (margin > 0.) {
        ++inside;
        wrong += !zero_interior;
      } else {
        ++outside;
        wrong += zero_slack > 0. || ac.contains(Vec3::Zero());
      }
    }
  }
  report(3, "interior iff zero acceleration is interior", wrong == 0 && inside > 0 && outside > 0,
         fmt::format("{} stances x 1000 COM positions: {} inside, {} outside, {} on the boundary skipped, {} "
                     "disagreements",
                     stances.size(), inside, outside, skipped, wrong));
}

void proposition_two()
{
  std::mt19937 rng(104);
  std::normal_distribution<double> jitter(0., 0.05), wide(0., 4.);
  int tubes = 0, draws = 0;
  long samples = 0, cone_misses = 0, lp_misses = 0;
  long converse = 0, converse_misses = 0;
  double worst_slack = 0.;
  while (tubes < 100) {
    ++draws;
    const ContactSet cs = random_stance(rng, 1 + draws % 3, 0.3, 0.7);
    const WrenchCone cone = compute_cwc(cs);
    const StaticPolygon sp = static_polygon(cone);
    if (sp.region.kind != RegionKind::Polygon) continue;
    const Vec2 c = sp.chebyshev;
    const Tube t = build_tube({c.x() + jitter(rng), c.y() + jitter(rng), 0.8},
                              {c.x() + jitter(rng), c.y() + jitter(rng), 0.85}, 0.03);
    const TubeCone tc = tube_cone(cone, t);
    if (tc.rays.empty()) continue;
    ++tubes;
    ForceOracle oracle(cs);
    for (int i = 0; i < 100; ++i) {
      const Vec3 p = random_point_in(t, rng);
      const AccelCone ac = accel_cone(cone, p);
      for (int j = 0; j < 100; ++j) {
        const Vec3 a = random_accel_in(tc, rng);
        ++samples;
        cone_misses += !ac.contains(a, 1e-9);
        lp_misses += !oracle.feasible(p, a);
      }
    }
    std::vector<AccelCone> at_vertices;
    for (const auto& v : t.vertices) at_vertices.push_back(accel_cone(cone, v));
    const Eigen::VectorXd norms = tc.reduced.rowwise().norm();
    for (int s = 0; s < 200; ++s) {
      const Vec3 a = random_accel_in(tc, rng) + 0.3 * Vec3(wide(rng), wide(rng), wide(rng));
      bool all = true;
      for (const auto& ac : at_vertices) all = all && ac.contains(a, 0.);
      if (!all) continue;
      ++converse;
      const double slack = -(tc.reduced * (a - gravity_vector())).cwiseQuotient(norms).maxCoeff();
      worst_slack = std::min(worst_slack, slack);
      converse_misses += slack < -1e-7;
    }
  }
  report(4, "tube cone soundness and tightness", cone_misses == 0 && lp_misses == 0 && converse > 0 && converse_misses == 0,
         fmt::format("{} tubes, {} (position, acceleration) samples: {} per-position cone misses, {} force-LP "
                     "misses; {} accelerations feasible at all 8 vertices, min slack {:.2e} (>= -1e-7)",
                     tubes, samples, cone_misses, lp_misses, converse, worst_slack));
}

void reduction_ratio(const BenchReport& bench)
{
  int checked = 0, too_big = 0;
  for (const auto& b : bench.double_support) {
    if (b.cone_empty) continue;
    ++checked;
    too_big += 10 * b.reduced_rows > b.raw_rows;
  }
  const BenchSummary s = bench.summary();
  report(5, "tube cone row reduction", checked > 0 && too_big == 0,
         fmt::format("{} double-support staircase stances ({} empty cones skipped): |C_T| {:.1f} +- {:.1f}, "
                     "|C'_T| {:.1f} +- {:.1f}, max ratio {:.4f} (<= 0.1)",
                     checked, s.empty_cones, s.raw_rows.mean, s.raw_rows.std, s.reduced_rows.mean,
                     s.reduced_rows.std, s.max_reduction));
}

void speed_ratio(const BenchReport& bench)
{
  const BenchSummary s = bench.summary();
  report(6, "hull-only recomputation speed", s.full_over_hull_only >= 3.,
         fmt::format("double support, {} stances: hull only {:.3f} ms, full {:.3f} ms per position, ratio {:.1f}x "
                     "(>= 3x); static polygon hull {:.3f} ms vs Bretl-Lall {:.3f} ms",
                     s.hull_only_ms.count, s.hull_only_ms.mean, s.full_ms.mean, s.full_over_hull_only,
                     s.hull_ms.mean, s.oracle_ms.mean));
}

std::vector<double> kkt_residuals;

void collect_kkt(const Trace& t)
{
  for (const auto& r : t.ticks) {
    if (r.qp_status == QpStatus::Optimal) kkt_residuals.push_back(r.kkt_residual);
  }
}

void flat_walk_run()
{
  const auto t0 = Clock::now();
  const Trace t = run_simulation(flat_walk());
  const double elapsed = seconds_since(t0);
  collect_kkt(t);
  const TraceCheck check = check_trace(t);
  const double miss = (t.ticks.back().p - t.final_target).norm();
  report(7, "flat walk", t.completed() && t.force_infeasible_ticks == 0 && check.infeasible == 0 && miss < 0.02 &&
                             elapsed < 60.,
         fmt::format("{} after {} ticks, {} force-infeasible ticks (re-check: {}), terminal error {:.4f} m, {:.1f} s",
                     to_string(t.outcome), t.ticks.size(), t.force_infeasible_ticks, check.infeasible, miss, elapsed));
}

void staircase_run()
{
  StaircaseOptions o;
  o.steps = 12;
  o.tilt_range = 0.3;
  const auto t0 = Clock::now();
  const Trace t = run_simulation(generate_staircase(o));
  const double elapsed = seconds_since(t0);
  collect_kkt(t);
  const TraceCheck check = check_trace(t);
  const bool pass = t.completed() && t.force_infeasible_ticks == 0 && check.infeasible == 0 && t.extended_phases >= 1;

  // Reported, not gated.
  const auto t1 = Clock::now();
  const Trace full = run_simulation(generate_staircase());
  const double full_elapsed = seconds_since(t1);
  std::string full_outcome = to_string(full.outcome);
  if (!full.completed()) full_outcome += fmt::format(" at tick {} ({})", full.failure_tick, full.cause);
  report(8, "tilted staircase", pass,
         fmt::format("seed 42, 12 steps, tilt 0.3 rad: {} after {} ticks, {} force-infeasible (re-check: {}), {} "
                     "QP-infeasible, {} condition-W extensions, {:.1f} s; 26 steps at 0.5 rad: {}, {:.1f} s",
                     to_string(t.outcome), t.ticks.size(), t.force_infeasible_ticks, check.infeasible,
                     t.qp_infeasible_ticks, t.extended_phases, elapsed, full_outcome, full_elapsed));
}

void numerical_hygiene()
{
  std::mt19937 rng(109);
  std::normal_distribution<double> n;
  int cones = 0, disagreements = 0;
  long samples = 0;
  for (int i = 0; i < 12; ++i) {
    const WrenchCone cwc = compute_cwc(random_stance(rng, 1 + i % 3, 0.5, 0.7));
    const PolyCone h = PolyCone::halfspaces(cwc.matrix());
    const PolyCone v = double_description(h).cone;
    const PolyCone h2 = double_description(v).cone;
    const Eigen::VectorXd n1 = h.rows.rowwise().norm(), n2 = h2.rows.rowwise().norm();
    ++cones;
    int counted = 0;
    while (counted < 10000) {
      // Mix of points near the cone (generator combinations) and anywhere.
      Eigen::VectorXd x(6);
      for (int k = 0; k < 6; ++k) x(k) = n(rng);
      if (counted % 2 == 0) {
        for (int r = 0; r < v.size(); ++r) x += std::abs(n(rng)) * v.rows.row(r).transpose();
      }
      const double m1 = (h.rows * x).cwiseQuotient(n1).maxCoeff() / x.norm();
      const double m2 = (h2.rows * x).cwiseQuotient(n2).maxCoeff() / x.norm();
      ++counted;
      if (std::abs(m1) < 1e-8 || std::abs(m2) < 1e-8) continue;
      disagreements += (m1 < 0.) != (m2 < 0.);
    }
    samples += counted;
  }
  double worst_kkt = 0.;
  for (double r : kkt_residuals) worst_kkt = std::max(worst_kkt, r);
  report(9, "numerical hygiene", disagreements == 0 && worst_kkt < 1e-7 && !kkt_residuals.empty(),
         fmt::format("{} contact wrench cones, {} H-V-H membership samples, {} disagreements beyond 1e-8; {} solved "
                     "previews, max KKT residual {:.2e} (< 1e-7)",
                     cones, samples, disagreements, kkt_residuals.size(), worst_kkt));
}

}  // namespace

int main()
{
  const auto t0 = Clock::now();
  const BenchReport bench = run_bench();
  region_oracle(bench);
  mass_invariance();
  proposition_one();
  proposition_two();
  reduction_ratio(bench);
  speed_ratio(bench);
  flat_walk_run();
  staircase_run();
  numerical_hygiene();
  std::printf("%d of 9 criteria failed, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
