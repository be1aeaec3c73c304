#pragma once

// Independent reference computations used only by the tests. They favour
// obviousness over speed and share no code paths with the library beyond the
// LP solver where noted.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "cwc/contact.hpp"
#include "cwc/lp.hpp"

namespace oracles {

/// Calls fn on every k-subset of {0..n-1}.
inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn)
{
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Vertices of the bounded polytope {x : A x <= b} by solving every d x d
/// subsystem.
inline std::vector<Eigen::VectorXd> vertices_by_enumeration(const Eigen::MatrixXd& A,
                                                            const Eigen::VectorXd& b, double tol)
{
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  std::vector<Eigen::VectorXd> out;
  if (m < d) return out;
  for_each_subset(m, d, [&](const std::vector<int>& rows) {
    Eigen::MatrixXd M(d, d);
    Eigen::VectorXd r(d);
    for (int k = 0; k < d; ++k) {
      M.row(k) = A.row(rows[k]);
      r(k) = b(rows[k]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (lu.rank() < d) return;
    const Eigen::VectorXd x = lu.solve(r);
    if ((A * x - b).maxCoeff() <= tol) out.push_back(x);
  });
  return out;
}

inline bool feasible_by_vertices(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol)
{
  return !vertices_by_enumeration(A, b, tol).empty();
}

/// Hull vertex indices by the all-pairs halfplane test: (i, j) is a CCW hull
/// edge iff every other point is strictly left of it or on the open segment.
inline std::vector<int> brute_force_hull(const std::vector<Eigen::Vector2d>& pts)
{
  const int n = static_cast<int>(pts.size());
  std::vector<int> is_vertex(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const Eigen::Vector2d e = pts[j] - pts[i];
      bool edge = true;
      for (int k = 0; k < n && edge; ++k) {
        if (k == i || k == j) continue;
        const Eigen::Vector2d q = pts[k] - pts[i];
        const double c = e.x() * q.y() - e.y() * q.x();
        if (c < 0.) edge = false;
        if (c == 0. && (q.dot(e) < 0. || q.dot(e) > e.squaredNorm())) edge = false;
      }
      if (edge) is_vertex[i] = is_vertex[j] = 1;
    }
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (is_vertex[i]) out.push_back(i);
  }
  return out;
}

/// Strictly convex QP min 1/2 x'Hx + f'x s.t. A x <= b, solved by accelerated
/// projected gradient on the dual (the only constraint there is lambda >= 0).
inline Eigen::VectorXd dual_projected_gradient_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& f,
                                                  const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                                  int iterations = 200000)
{
  const Eigen::LLT<Eigen::MatrixXd> llt(H);
  const Eigen::MatrixXd HiAt = llt.solve(A.transpose());
  const Eigen::VectorXd Hif = llt.solve(f);
  // Dual: max -1/2 l'(A Hi A')l - l'(A Hi f + b) + const.
  const Eigen::MatrixXd Q = A * HiAt;
  const Eigen::VectorXd c = A * Hif + b;
  const double L = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q).eigenvalues().maxCoeff();
  Eigen::VectorXd lam = Eigen::VectorXd::Zero(A.rows());
  Eigen::VectorXd y = lam;
  double t = 1.;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd grad = Q * y + c;
    const Eigen::VectorXd next = (y - grad / L).cwiseMax(0.);
    const double tn = 0.5 * (1. + std::sqrt(1. + 4. * t * t));
    y = next + ((t - 1.) / tn) * (next - lam);
    lam = next;
    t = tn;
  }
  return -(Hif + HiAt * lam);
}

/// Is there a force set, each force a nonnegative combination of its
/// pyramid's rays, whose net wrench at `origin` equals w = (f, tau)?
inline bool wrench_feasible(const cwc::ContactSet& cs, const Eigen::Matrix<double, 6, 1>& w,
                            const Eigen::Vector3d& origin = Eigen::Vector3d::Zero())
{
  std::vector<Eigen::Vector3d> rays;
  std::vector<int> owner;
  for (int i = 0; i < cs.size(); ++i) {
    for (const auto& r : cwc::linearize_friction(cs.contacts[i]).rays) {
      rays.push_back(r);
      owner.push_back(i);
    }
  }
  const int nr = static_cast<int>(rays.size());
  // Stacked forces f = E lambda, then G f = w.
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(3 * cs.size(), nr);
  for (int k = 0; k < nr; ++k) E.block<3, 1>(3 * owner[k], k) = rays[k];
  cwc::LpProblem lp;
  lp.cost = Eigen::VectorXd::Zero(nr);
  lp.A_eq = cwc::grasp_matrix(cs, origin) * E;
  lp.b_eq = w;
  lp.A_ub.resize(0, nr);
  lp.b_ub.resize(0);
  lp.nonneg.assign(nr, true);
  return lp_solve(lp).optimal();
}

/// Force existence for a point mass (mass-normalized) at p accelerating at
/// pdd with zero angular momentum.
inline bool accel_feasible(const cwc::ContactSet& cs, const Eigen::Vector3d& p,
                           const Eigen::Vector3d& pdd, double g = 9.81)
{
  const Eigen::Vector3d f = pdd - Eigen::Vector3d(0., 0., -g);
  Eigen::Matrix<double, 6, 1> w;
  w << f, p.cross(f);
  return wrench_feasible(cs, w);
}

inline bool static_feasible(const cwc::ContactSet& cs, const Eigen::Vector2d& xy)
{
  return accel_feasible(cs, Eigen::Vector3d(xy.x(), xy.y(), 0.), Eigen::Vector3d::Zero());
}

/// Static-equilibrium region sampled on a grid of rows spaced `step` apart in
/// y; on each row the feasible interval (convex) is bracketed by a coarse scan
/// and its ends bisected down to `step`. Returns the interval end points.
inline std::vector<Eigen::Vector2d> lp_grid_polygon(const cwc::ContactSet& cs,
                                                    const Eigen::Vector2d& lo,
                                                    const Eigen::Vector2d& hi, double step)
{
  std::vector<Eigen::Vector2d> out;
  const double coarse = 10. * step;
  for (double y = lo.y(); y <= hi.y() + 1e-12; y += step) {
    double inside = NAN;
    for (double x = lo.x(); x <= hi.x() + 1e-12; x += coarse) {
      if (static_feasible(cs, {x, y})) {
        inside = x;
        break;
      }
    }
    if (std::isnan(inside)) {
      for (double x = lo.x() + 0.5 * coarse; x <= hi.x(); x += coarse) {
        if (static_feasible(cs, {x, y})) {
          inside = x;
          break;
        }
      }
    }
    if (std::isnan(inside)) continue;
    auto edge = [&](double out_x) {
      double a = inside, b = out_x;  // a feasible, b not (or the box end)
      if (static_feasible(cs, {b, y})) return b;
      while (std::abs(b - a) > step) {
        const double mid = 0.5 * (a + b);
        (static_feasible(cs, {mid, y}) ? a : b) = mid;
      }
      return a;
    };
    out.emplace_back(edge(lo.x()), y);
    out.emplace_back(edge(hi.x()), y);
  }
  return out;
}

}  // namespace oracles
