#pragma once

#include <Eigen/Core>

namespace cwc {

/// min 1/2 x'Hx + f'x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq.
struct QpProblem
{
  Eigen::MatrixXd H;
  Eigen::VectorXd f;
  Eigen::MatrixXd A_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
};

enum class QpStatus
{
  Optimal,
  Infeasible,
  IterationLimit,
};

const char* to_string(QpStatus s);

struct QpOptions
{
  /// Constraint violation accepted at termination (rows normalized).
  double feasibility_tol = 1e-10;
  int max_iterations = 5000;
  /// Proximal weight used when H is only positive semidefinite.
  double proximal_weight = 1e-6;
  int max_proximal_rounds = 400;
};

struct QpResult
{
  QpStatus status = QpStatus::Infeasible;
  Eigen::VectorXd x;
  /// Multipliers, >= 0 for inequalities; stationarity reads
  /// Hx + f + A_ub' lambda + A_eq' nu = 0.
  Eigen::VectorXd lambda_ub;
  Eigen::VectorXd nu_eq;
  double value = 0.;
  int iterations = 0;

  bool optimal() const { return status == QpStatus::Optimal; }
};

/// Dual active-set method (Goldfarb-Idnani) for strictly convex problems, with
/// an outer proximal-point loop when H is singular.
QpResult qp_solve(const QpProblem& problem, const QpOptions& options = {});

/// Largest violation among stationarity, primal feasibility, dual feasibility
/// and complementarity.
double kkt_residual(const QpProblem& problem, const QpResult& result);

}  // namespace cwc
