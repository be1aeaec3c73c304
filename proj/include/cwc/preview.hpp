#pragma once

#include <vector>

#include <Eigen/Core>

#include "cwc/geometry.hpp"
#include "cwc/polytope.hpp"
#include "cwc/qp.hpp"

namespace cwc {

struct ComState
{
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();

  Vec6 stacked() const
  {
    Vec6 x;
    x << p, v;
    return x;
  }
};

/// One exact step of the double integrator under constant acceleration u.
ComState integrate(const ComState& x, const Vec3& u, double dt);

/// States x(0), x(1), ..., x(N) under the controls u(0..N-1).
/// Throws std::invalid_argument if dt <= 0.
std::vector<ComState> propagate(const ComState& x0, const std::vector<Vec3>& u, double dt);

/// x(k) = Phi_k x(0) + Psi_k U with U the 3N stacked controls.
using Mat6 = Eigen::Matrix<double, 6, 6>;
Mat6 transition_matrix(int k, double dt);
Eigen::MatrixXd control_matrix(int k, int N, double dt);

/// Constraints shared by the steps k in [begin, end): C u(k) <= C g on the
/// controls and tube.A p(k+1) <= tube.b on the resulting positions.
struct PreviewSegment
{
  int begin = 0;
  int end = 0;
  Eigen::MatrixXd cone;
  HPolytope tube;
};

struct PreviewProblem
{
  ComState x0;
  ComState xT;
  int N = 10;
  double dt = 0.1;
  double eps = 1e-3;
  std::vector<PreviewSegment> segments;
  Vec3 g = gravity_vector();
};

/// Checks N >= 1, dt > 0 and that the segments partition [0, N).
/// Throws std::invalid_argument otherwise.
void validate(const PreviewProblem& pp);

struct PreviewQp
{
  QpProblem qp;
  int cone_rows = 0;
  int tube_rows = 0;
};

/// Objective |x(N) - xT|^2 + eps |U|^2 as 1/2 U'HU + f'U (constant dropped),
/// plus the per-step cone and tube rows.
PreviewQp assemble_qp(const PreviewProblem& pp);

struct ControlSequence
{
  std::vector<Vec3> u;
  /// x(1..N).
  std::vector<ComState> states;
};

struct PreviewSolution
{
  QpStatus status = QpStatus::Infeasible;
  ControlSequence controls;
  double kkt_residual = 0.;
  /// Smallest normalized slack over all constraint rows (negative = violated).
  double min_slack = 0.;
  int cone_rows = 0;
  int tube_rows = 0;

  bool feasible() const { return status == QpStatus::Optimal; }
};

PreviewSolution solve_preview(const PreviewProblem& pp, const QpOptions& options = {});

}  // namespace cwc
