#pragma once

#include <vector>

#include <Eigen/Core>

namespace cwc {

/// min cost.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x_j >= 0 where nonneg[j].
///
/// Variables are free unless flagged in `nonneg` (an empty mask means all free).
/// Empty constraint blocks may be left default-constructed.
struct LpProblem
{
  Eigen::VectorXd cost;
  Eigen::MatrixXd A_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  std::vector<bool> nonneg;
};

enum class LpStatus
{
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
};

const char* to_string(LpStatus s);

struct LpOptions
{
  /// Feasibility tolerance on row-equilibrated constraints.
  double eps = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_switch = 20;
  int max_iterations = 20000;
};

struct LpResult
{
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double value = 0.;
  int iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Dense two-phase primal simplex. Deterministic for a fixed input: Dantzig
/// pricing with a fallback to Bland's rule on stalling, lowest-index tie
/// breaking in the ratio test.
LpResult lp_solve(const LpProblem& problem, const LpOptions& options = {});

/// Convenience: is {x : A_ub x <= b_ub, A_eq x = b_eq} nonempty?
bool lp_feasible(const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                 const Eigen::MatrixXd& A_eq = {}, const Eigen::VectorXd& b_eq = {},
                 const LpOptions& options = {});

}  // namespace cwc
