#pragma once

#include <vector>

#include <Eigen/Core>

#include "cwc/lp.hpp"

namespace cwc {

/// {x : A x <= b}
struct HPolytope
{
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  int dim() const { return static_cast<int>(A.cols()); }
  int rows() const { return static_cast<int>(A.rows()); }

  /// Per-row slack b - A x; nonnegative entries mean the row holds.
  Eigen::VectorXd slack(const Eigen::VectorXd& x) const { return b - A * x; }
  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
};

/// conv(vertices) + rays(rays).
struct VPolytope
{
  std::vector<Eigen::VectorXd> vertices;
  std::vector<Eigen::VectorXd> rays;
};

enum class ChebyshevStatus
{
  Found,
  Infeasible,
  Unbounded,
};

struct ChebyshevBall
{
  ChebyshevStatus status = ChebyshevStatus::Infeasible;
  Eigen::VectorXd center;
  double radius = 0.;
};

/// Center of the largest ball inscribed in {x : A x <= b}, by one LP.
ChebyshevBall chebyshev_center(const HPolytope& p, const LpOptions& options = {});

}  // namespace cwc
