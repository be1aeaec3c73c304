#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "cwc/contact.hpp"
#include "cwc/polygon.hpp"
#include "cwc/scenario.hpp"

namespace cwc {

struct BenchOptions
{
  /// Random stances for the polygon comparison, cycling through 1, 2 and 3
  /// rectangular contacts.
  int stances = 120;
  std::uint64_t seed = 7;
  double max_tilt = 0.5;
  double mu = 0.7;
  /// Bretl-Lall stopping tolerance (m^2).
  double oracle_area_tol = 1e-9;
  /// Double-support stances come from this staircase.
  StaircaseOptions staircase;
  double tube_radius = 0.05;
  /// COM positions per double-support stance for the per-position timing.
  int positions = 20;
  /// Timing repeats; the minimum is kept.
  int repeats = 3;
  /// Threads sharing the random stances (timings get noisier above 1).
  int workers = 1;
};

struct StanceBench
{
  int contacts = 0;
  RegionKind hull_kind = RegionKind::Empty;
  RegionKind oracle_kind = RegionKind::Empty;
  double hull_ms = 0.;
  double oracle_ms = 0.;
  int oracle_queries = 0;
  /// Between the two vertex sets; 0 when both are empty, infinite when the
  /// kinds disagree.
  double hausdorff = 0.;
};

struct DoubleSupportBench
{
  /// Index of the rear footstep.
  int step = 0;
  int cwc_rows = 0;
  int raw_rows = 0;
  int reduced_rows = 0;
  bool cone_empty = false;
  /// Per COM position: acceleration cone from the cached CWC vs CWC rebuilt.
  double hull_only_ms = 0.;
  double full_ms = 0.;
};

struct MeanStd
{
  double mean = 0.;
  double std = 0.;
  int count = 0;
};

MeanStd mean_std(const std::vector<double>& xs);

struct BenchSummary
{
  MeanStd hull_ms, oracle_ms;
  double oracle_over_hull = 0.;
  double max_hausdorff = 0.;
  int kind_mismatches = 0;
  MeanStd hull_only_ms, full_ms;
  double full_over_hull_only = 0.;
  /// Over double-support stances with a nonempty tube cone.
  MeanStd raw_rows, reduced_rows;
  double max_reduction = 0.;
  int empty_cones = 0;
};

struct BenchReport
{
  BenchOptions options;
  std::vector<StanceBench> stances;
  std::vector<DoubleSupportBench> double_support;

  BenchSummary summary() const;
};

/// 1 to 3 rectangular contacts with roll and pitch up to `max_tilt`, any yaw,
/// spread over a walking-scale area.
ContactSet random_stance(std::mt19937& rng, int contacts, double max_tilt = 0.5, double mu = 0.7);

BenchReport run_bench(const BenchOptions& options = {});

/// JSON lines: a header, one record per measurement, then the summary.
void write_bench(std::ostream& out, const BenchReport& r);

/// Human-readable summary table.
void print_bench(std::ostream& out, const BenchReport& r);

}  // namespace cwc
