#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cwc/double_description.hpp"

using namespace cwc;

namespace {

bool contains_row(const Eigen::MatrixXd& rows, const Eigen::VectorXd& v, double tol)
{
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    if ((rows.row(i).transpose().normalized() - v.normalized()).norm() < tol) return true;
  }
  return false;
}

Eigen::MatrixXd random_rays(std::mt19937& rng, int count)
{
  std::normal_distribution<double> n;
  Eigen::MatrixXd R(count, 3);
  for (int i = 0; i < count; ++i) {
    // Bias upward so the cone is pointed.
    R.row(i) << n(rng), n(rng), 2. + std::abs(n(rng));
  }
  return R;
}

}  // namespace

TEST(DoubleDescription, Octant)
{
  const DdResult r = double_description(PolyCone::generators(Eigen::MatrixXd::Identity(3, 3)));
  ASSERT_EQ(r.cone.rep, PolyCone::Rep::Halfspace);
  ASSERT_EQ(r.cone.size(), 3);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(contains_row(r.cone.rows, -Eigen::Vector3d::Unit(k), 1e-12));
  EXPECT_FALSE(r.rank_deficient);
}

TEST(DoubleDescription, FrictionPyramidMembership)
{
  const double mu = 0.7 / std::sqrt(2.);
  Eigen::MatrixXd R(4, 3);
  R << mu, mu, 1, mu, -mu, 1, -mu, mu, 1, -mu, -mu, 1;
  const DdResult h = double_description(PolyCone::generators(R));
  ASSERT_EQ(h.cone.size(), 4);
  const PolyCone v = PolyCone::generators(R);
  std::mt19937 rng(13);
  std::normal_distribution<double> n;
  for (int s = 0; s < 10000; ++s) {
    const Eigen::Vector3d x(n(rng), n(rng), std::abs(n(rng)) * 1.2);
    const double margin = (h.cone.rows * x).maxCoeff();
    if (std::abs(margin) < 1e-8) continue;
    ASSERT_EQ(margin <= 0., v.contains(x)) << x.transpose();
  }
}

TEST(DoubleDescription, VHVRoundTrip)
{
  std::mt19937 rng(14);
  for (int t = 0; t < 30; ++t) {
    const Eigen::MatrixXd R = random_rays(rng, 3 + t % 6);
    const PolyCone v = PolyCone::generators(R);
    const DdResult h = double_description(v);
    const DdResult back = double_description(h.cone);
    ASSERT_EQ(back.cone.rep, PolyCone::Rep::Generator);
    for (Eigen::Index i = 0; i < back.cone.rows.rows(); ++i) {
      EXPECT_TRUE(v.contains(back.cone.rows.row(i).transpose(), 1e-9));
    }
    for (Eigen::Index i = 0; i < R.rows(); ++i) {
      EXPECT_TRUE(back.cone.contains(R.row(i).transpose(), 1e-9));
    }
  }
}

TEST(DoubleDescription, HVHMembershipAgreement)
{
  std::mt19937 rng(15);
  std::normal_distribution<double> n;
  for (int t = 0; t < 5; ++t) {
    const PolyCone v = PolyCone::generators(random_rays(rng, 7));
    const PolyCone h = double_description(v).cone;
    const PolyCone h2 = double_description(double_description(h).cone).cone;
    for (int s = 0; s < 10000; ++s) {
      const Eigen::Vector3d x(n(rng), n(rng), n(rng) + 1.);
      const double m1 = (h.rows * x).maxCoeff(), m2 = (h2.rows * x).maxCoeff();
      if (std::abs(m1) < 1e-8 || std::abs(m2) < 1e-8) continue;
      ASSERT_EQ(m1 < 0., m2 < 0.);
    }
  }
}

TEST(DoubleDescription, RankDeficientCarriesLines)
{
  // The upper half-plane in R^2: generated by e1, -e1, e2.
  Eigen::MatrixXd R(3, 2);
  R << 1, 0, -1, 0, 0, 1;
  const DdResult h = double_description(PolyCone::generators(R));
  ASSERT_EQ(h.cone.size(), 1);
  EXPECT_TRUE(contains_row(h.cone.rows, Eigen::Vector2d(0, -1), 1e-12));

  // Generators spanning a plane in R^3: the H-rep needs a +-normal pair.
  Eigen::MatrixXd P(3, 3);
  P << 1, 0, 0, 0, 1, 0, -1, -1, 0;
  const DdResult flat = double_description(PolyCone::generators(P));
  EXPECT_TRUE(flat.rank_deficient);
  EXPECT_TRUE(contains_row(flat.cone.rows, Eigen::Vector3d(0, 0, 1), 1e-12));
  EXPECT_TRUE(contains_row(flat.cone.rows, Eigen::Vector3d(0, 0, -1), 1e-12));
}

TEST(DoubleDescription, OutputIsIrredundant)
{
  std::mt19937 rng(16);
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd R = random_rays(rng, 8);
    const Eigen::MatrixXd A = double_description(PolyCone::generators(R)).cone.rows;
    EXPECT_EQ(prune_redundant_halfspaces(A).rows(), A.rows());
  }
}

TEST(DoubleDescription, PruneRemovesImpliedRow)
{
  Eigen::MatrixXd A(4, 3);
  A << -1, 0, 0, 0, -1, 0, 0, 0, -1, -1, -1, 0;
  EXPECT_EQ(prune_redundant_halfspaces(A).rows(), 3);
}
