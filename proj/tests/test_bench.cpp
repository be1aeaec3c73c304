#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cwc/bench.hpp"
#include "cwc/stability.hpp"

using namespace cwc;

namespace {

BenchOptions small()
{
  BenchOptions o;
  o.stances = 9;
  o.positions = 3;
  o.repeats = 1;
  o.staircase.steps = 4;
  return o;
}

}  // namespace

TEST(MeanStd, PopulationMoments)
{
  const MeanStd m = mean_std({1., 2., 3., 4.});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_NEAR(m.std, std::sqrt(1.25), 1e-15);
  EXPECT_EQ(m.count, 4);
  EXPECT_EQ(mean_std({}).count, 0);
}

TEST(RandomStance, FourCornersPerContact)
{
  std::mt19937 rng(1);
  for (int n = 1; n <= 3; ++n) EXPECT_EQ(random_stance(rng, n).size(), 4 * n);
}

TEST(Bench, SmallRunAgreesWithOracle)
{
  const BenchReport r = run_bench(small());
  ASSERT_EQ(r.stances.size(), 9u);
  ASSERT_EQ(r.double_support.size(), 3u);
  const BenchSummary s = r.summary();
  EXPECT_EQ(s.kind_mismatches, 0);
  EXPECT_LT(s.max_hausdorff, 1e-4);
  for (size_t i = 0; i < r.stances.size(); ++i) EXPECT_EQ(r.stances[i].contacts, 1 + static_cast<int>(i) % 3);
  for (const auto& d : r.double_support) {
    EXPECT_EQ(d.raw_rows, 8 * d.cwc_rows);
    if (!d.cone_empty) EXPECT_LT(d.reduced_rows, d.raw_rows);
  }
}

TEST(Bench, WorkersDoNotChangeResults)
{
  BenchOptions o = small();
  const BenchReport a = run_bench(o);
  o.workers = 3;
  const BenchReport b = run_bench(o);
  for (size_t i = 0; i < a.stances.size(); ++i) {
    EXPECT_EQ(a.stances[i].hull_kind, b.stances[i].hull_kind);
    EXPECT_EQ(a.stances[i].hausdorff, b.stances[i].hausdorff);
  }
}

TEST(Bench, ReportIsJsonLines)
{
  const BenchReport r = run_bench(small());
  std::stringstream buf;
  write_bench(buf, r);
  std::string line;
  int records = 0;
  nlohmann::json last;
  while (std::getline(buf, line)) {
    last = nlohmann::json::parse(line);
    ++records;
  }
  EXPECT_EQ(records, 1 + 9 + 3 + 1);
  ASSERT_TRUE(last.contains("summary"));
  EXPECT_EQ(last["summary"]["kind_mismatches"], 0);
}
