#include <random>

#include <gtest/gtest.h>

#include "cwc/qp.hpp"
#include "oracles.hpp"

using namespace cwc;

TEST(Qp, LowerBound1d)
{
  QpProblem qp;
  qp.H = Eigen::MatrixXd::Constant(1, 1, 2.);
  qp.f = Eigen::VectorXd::Zero(1);
  qp.A_ub = Eigen::MatrixXd::Constant(1, 1, -1.);
  qp.b_ub = Eigen::VectorXd::Constant(1, -1.);
  const QpResult r = qp_solve(qp);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.x(0), 1., 1e-12);
  EXPECT_LT(kkt_residual(qp, r), 1e-7);
}

TEST(Qp, UnconstrainedTracking)
{
  Eigen::VectorXd a(3);
  a << 1., -2., 0.5;
  QpProblem qp;
  qp.H = 2. * Eigen::MatrixXd::Identity(3, 3);
  qp.f = -2. * a;
  const QpResult r = qp_solve(qp);
  ASSERT_TRUE(r.optimal());
  EXPECT_LT((r.x - a).norm(), 1e-12);
}

TEST(Qp, EmptyFeasibleSet)
{
  QpProblem qp;
  qp.H = Eigen::MatrixXd::Identity(1, 1);
  qp.f = Eigen::VectorXd::Zero(1);
  qp.A_ub.resize(2, 1);
  qp.A_ub << 1., -1.;
  qp.b_ub = Eigen::VectorXd::Constant(2, -1.);
  EXPECT_EQ(qp_solve(qp).status, QpStatus::Infeasible);
}

TEST(Qp, EqualityConstrained)
{
  QpProblem qp;
  qp.H = Eigen::MatrixXd::Identity(2, 2);
  qp.f = Eigen::VectorXd::Zero(2);
  qp.A_eq = Eigen::MatrixXd::Ones(1, 2);
  qp.b_eq = Eigen::VectorXd::Ones(1);
  const QpResult r = qp_solve(qp);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.x(0), 0.5, 1e-12);
  EXPECT_NEAR(r.x(1), 0.5, 1e-12);
}

TEST(Qp, SemidefiniteHessian)
{
  // min (x0 - 1)^2 s.t. x1 <= 2, x0 + x1 >= 4; x1 is free in the objective.
  QpProblem qp;
  qp.H = Eigen::MatrixXd::Zero(2, 2);
  qp.H(0, 0) = 2.;
  qp.f = Eigen::Vector2d(-2., 0.);
  qp.A_ub.resize(2, 2);
  qp.A_ub << 0, 1, -1, -1;
  qp.b_ub = Eigen::Vector2d(2., -4.);
  const QpResult r = qp_solve(qp);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.x(0), 2., 1e-5);
  EXPECT_LT(kkt_residual(qp, r), 1e-6);
}

TEST(Qp, RandomMatchesDualGradientOracle)
{
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1., 1.);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 10, m = 15;
    const Eigen::MatrixXd R = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng); });
    QpProblem qp;
    qp.H = R * R.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    qp.f = Eigen::VectorXd::NullaryExpr(n, [&] { return 3. * u(rng); });
    qp.A_ub = Eigen::MatrixXd::NullaryExpr(m, n, [&] { return u(rng); });
    qp.b_ub = Eigen::VectorXd::NullaryExpr(m, [&] { return 0.2 + std::abs(u(rng)); });
    const QpResult r = qp_solve(qp);
    ASSERT_TRUE(r.optimal()) << "trial " << trial;
    EXPECT_LT(kkt_residual(qp, r), 1e-7);

    const Eigen::VectorXd xo = oracles::dual_projected_gradient_qp(qp.H, qp.f, qp.A_ub, qp.b_ub);
    auto obj = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(qp.H * x) + qp.f.dot(x); };
    EXPECT_NEAR(obj(r.x), obj(xo), 1e-6) << "trial " << trial;
  }
}

TEST(Qp, Deterministic)
{
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-1., 1.);
  QpProblem qp;
  qp.H = Eigen::MatrixXd::Identity(5, 5);
  qp.f = Eigen::VectorXd::NullaryExpr(5, [&] { return u(rng); });
  qp.A_ub = Eigen::MatrixXd::NullaryExpr(8, 5, [&] { return u(rng); });
  qp.b_ub = Eigen::VectorXd::Constant(8, 0.1);
  const QpResult a = qp_solve(qp), b = qp_solve(qp);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a.x(i), b.x(i));
}
