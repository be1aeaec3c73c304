#include "cwc/polytope.hpp"

#include <algorithm>
#include <cmath>

namespace cwc {

bool HPolytope::contains(const Eigen::VectorXd& x, double tol) const
{
  if (A.rows() == 0) return true;
  return (A * x - b).maxCoeff() <= tol;
}

namespace {

LpProblem chebyshev_lp(const HPolytope& p, const std::vector<int>& rows, double box)
{
  const int d = p.dim();
  const int m = static_cast<int>(rows.size());
  const int extra = box > 0. ? 2 * d + 1 : 0;

  // Variables (x, r): maximize r s.t. a_i.x + |a_i| r <= b_i. The radius is
  // free so an empty region shows up as r < 0 rather than infeasibility.
  LpProblem lp;
  lp.cost = Eigen::VectorXd::Zero(d + 1);
  lp.cost(d) = -1.;
  lp.A_ub = Eigen::MatrixXd::Zero(m + extra, d + 1);
  lp.b_ub.resize(m + extra);
  for (int k = 0; k < m; ++k) {
    lp.A_ub.row(k).head(d) = p.A.row(rows[k]);
    lp.A_ub(k, d) = p.A.row(rows[k]).norm();
    lp.b_ub(k) = p.b(rows[k]);
  }
  for (int j = 0; j < extra - 1; ++j) {
    lp.A_ub(m + j, j / 2) = j % 2 ? -1. : 1.;
    lp.b_ub(m + j) = box;
  }
  if (extra) {
    lp.A_ub(m + extra - 1, d) = 1.;
    lp.b_ub(m + extra - 1) = box;
  }
  lp.A_eq.resize(0, d + 1);
  lp.b_eq.resize(0);
  lp.nonneg.assign(d + 1, false);
  return lp;
}

// Radii this far below zero certify an empty region; smaller ones are
// rounding on lower-dimensional regions.
constexpr double kEmptyRadius = 1e-8;

ChebyshevBall to_ball(const LpResult& r, int d)
{
  ChebyshevBall ball;
  switch (r.status) {
    case LpStatus::Optimal:
      if (r.x(d) < -kEmptyRadius) {
        ball.status = ChebyshevStatus::Infeasible;
        break;
      }
      ball.status = ChebyshevStatus::Found;
      ball.center = r.x.head(d);
      ball.radius = std::max(r.x(d), 0.);
      break;
    case LpStatus::Unbounded:
      ball.status = ChebyshevStatus::Unbounded;
      break;
    default:
      ball.status = ChebyshevStatus::Infeasible;
      break;
  }
  return ball;
}

constexpr int kDirectRows = 64;
constexpr double kCuttingBox = 1e6;
constexpr double kUnboundedBox = 1e12;

}  // namespace

ChebyshevBall chebyshev_center(const HPolytope& p, const LpOptions& options)
{
  const int d = p.dim();
  const int m = p.rows();
  std::vector<int> all(m);
  for (int i = 0; i < m; ++i) all[i] = i;
  if (m <= kDirectRows) return to_ball(lp_solve(chebyshev_lp(p, all, 0.), options), d);

  // Row generation: solve on a growing subset inside a large box, add the
  // most violated rows until the subset optimum is feasible for all. An
  // optimum still pressed against a much larger box means unbounded.
  const Eigen::VectorXd norms = p.A.rowwise().norm();
  std::vector<int> working;
  std::vector<bool> used(m, false);
  const int batch = 2 * (d + 1);
  double box = kCuttingBox;
  for (int round = 0; round <= m; ++round) {
    const LpResult r = lp_solve(chebyshev_lp(p, working, box), options);
    // A subset already without a ball of nonnegative radius settles it.
    if (r.status != LpStatus::Optimal || r.x(d) < -kEmptyRadius) return to_ball(r, d);
    const Eigen::VectorXd x = r.x.head(d);
    const Eigen::VectorXd viol = p.A * x + norms * r.x(d) - p.b;
    std::vector<std::pair<double, int>> worst;
    for (int i = 0; i < m; ++i) {
      if (!used[i] && viol(i) > options.eps * std::max(1., std::abs(p.b(i)))) worst.emplace_back(-viol(i), i);
    }
    if (worst.empty()) {
      const bool on_box = (x.cwiseAbs().maxCoeff() >= 0.5 * box) || r.x(d) >= 0.5 * box;
      if (!on_box) return to_ball(r, d);
      if (box >= kUnboundedBox) {
        ChebyshevBall ball;
        ball.status = ChebyshevStatus::Unbounded;
        return ball;
      }
      box = kUnboundedBox;
      continue;
    }
    std::sort(worst.begin(), worst.end());
    for (int k = 0; k < std::min<int>(batch, worst.size()); ++k) {
      used[worst[k].second] = true;
      working.push_back(worst[k].second);
    }
  }
  return to_ball(lp_solve(chebyshev_lp(p, all, 0.), options), d);
}

}  // namespace cwc
