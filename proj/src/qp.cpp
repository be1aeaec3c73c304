#include "cwc/qp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace cwc {

const char* to_string(QpStatus s)
{
  switch (s) {
    case QpStatus::Optimal:
      return "optimal";
    case QpStatus::Infeasible:
      return "infeasible";
    case QpStatus::IterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMachEps = std::numeric_limits<double>::epsilon();

// Strictly convex problem in Goldfarb-Idnani form:
//   min 1/2 x'Gx + g0'x  s.t.  CE'x + ce0 = 0,  CI'x + ci0 >= 0.
struct GiState
{
  Eigen::MatrixXd J;
  Eigen::MatrixXd R;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  std::vector<int> active;  // equality i stored as -(i + 1)
  int iq = 0;
  double r_norm = 1.;
};

void givens(double& cc, double& ss, double& h, double a, double b)
{
  h = std::hypot(a, b);
  cc = a / h;
  ss = b / h;
}

bool add_constraint(GiState& s, Eigen::VectorXd& d)
{
  const int n = static_cast<int>(s.x.size());
  for (int j = n - 1; j >= s.iq + 1; --j) {
    if (d(j) == 0.) continue;
    double cc, ss, h;
    givens(cc, ss, h, d(j - 1), d(j));
    d(j) = 0.;
    if (cc < 0.) {
      cc = -cc;
      ss = -ss;
      d(j - 1) = -h;
    } else {
      d(j - 1) = h;
    }
    const double xny = ss / (1. + cc);
    for (int k = 0; k < n; ++k) {
      const double t1 = s.J(k, j - 1);
      const double t2 = s.J(k, j);
      s.J(k, j - 1) = t1 * cc + t2 * ss;
      s.J(k, j) = xny * (t1 + s.J(k, j - 1)) - t2;
    }
  }
  ++s.iq;
  s.R.col(s.iq - 1).head(s.iq) = d.head(s.iq);
  if (std::abs(d(s.iq - 1)) <= 1e3 * kMachEps * s.r_norm) return false;
  s.r_norm = std::max(s.r_norm, std::abs(d(s.iq - 1)));
  return true;
}

void delete_constraint(GiState& s, int n_eq, int constraint)
{
  const int n = static_cast<int>(s.x.size());
  int qq = -1;
  for (int i = n_eq; i < s.iq; ++i) {
    if (s.active[i] == constraint) {
      qq = i;
      break;
    }
  }
  if (qq < 0) return;
  for (int i = qq; i < s.iq - 1; ++i) {
    s.active[i] = s.active[i + 1];
    s.u(i) = s.u(i + 1);
    s.R.col(i) = s.R.col(i + 1);
  }
  s.active[s.iq - 1] = s.active[s.iq];
  s.u(s.iq - 1) = s.u(s.iq);
  s.active[s.iq] = 0;
  s.u(s.iq) = 0.;
  s.R.col(s.iq - 1).head(s.iq).setZero();
  --s.iq;
  if (s.iq == 0) return;

  for (int j = qq; j < s.iq; ++j) {
    const double a = s.R(j, j);
    const double b = s.R(j + 1, j);
    if (b == 0.) continue;
    double cc, ss, h;
    givens(cc, ss, h, a, b);
    s.R(j + 1, j) = 0.;
    if (cc < 0.) {
      s.R(j, j) = -h;
      cc = -cc;
      ss = -ss;
    } else {
      s.R(j, j) = h;
    }
    const double xny = ss / (1. + cc);
    for (int k = j + 1; k < s.iq; ++k) {
      const double t1 = s.R(j, k);
      const double t2 = s.R(j + 1, k);
      s.R(j, k) = t1 * cc + t2 * ss;
      s.R(j + 1, k) = xny * (t1 + s.R(j, k)) - t2;
    }
    for (int k = 0; k < n; ++k) {
      const double t1 = s.J(k, j);
      const double t2 = s.J(k, j + 1);
      s.J(k, j) = t1 * cc + t2 * ss;
      s.J(k, j + 1) = xny * (s.J(k, j) + t1) - t2;
    }
  }
}

// Primal step direction z and dual step direction r for constraint normal np.
void step_directions(const GiState& s, const Eigen::VectorXd& np, Eigen::VectorXd& d,
                     Eigen::VectorXd& z, Eigen::VectorXd& r)
{
  const int n = static_cast<int>(s.x.size());
  d = s.J.transpose() * np;
  z = s.J.rightCols(n - s.iq) * d.tail(n - s.iq);
  r.resize(s.iq);
  for (int i = s.iq - 1; i >= 0; --i) {
    double sum = d(i);
    for (int j = i + 1; j < s.iq; ++j) sum -= s.R(i, j) * r(j);
    r(i) = sum / s.R(i, i);
  }
}

QpStatus goldfarb_idnani(const Eigen::MatrixXd& G, const Eigen::VectorXd& g0,
                         const Eigen::MatrixXd& CE, const Eigen::VectorXd& ce0,
                         const Eigen::MatrixXd& CI, const Eigen::VectorXd& ci0,
                         const QpOptions& opt, Eigen::VectorXd& x_out,
                         Eigen::VectorXd& u_eq, Eigen::VectorXd& u_ineq, int& iterations)
{
  const int n = static_cast<int>(G.rows());
  const int me = static_cast<int>(CE.cols());
  const int mi = static_cast<int>(CI.cols());

  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) throw std::runtime_error("qp_solve: H is not positive definite");

  GiState s;
  const Eigen::MatrixXd L = llt.matrixL();
  s.J = L.triangularView<Eigen::Lower>()
            .solve(Eigen::MatrixXd::Identity(n, n))
            .transpose();
  s.R = Eigen::MatrixXd::Zero(n, n);
  s.x = llt.solve(-g0);
  s.u = Eigen::VectorXd::Zero(n + 1);
  s.active.assign(n + 1, 0);

  Eigen::VectorXd d, z, r;
  for (int i = 0; i < me; ++i) {
    const Eigen::VectorXd np = CE.col(i);
    step_directions(s, np, d, z, r);
    double t2 = 0.;
    if (z.squaredNorm() > kMachEps) t2 = (-np.dot(s.x) - ce0(i)) / z.dot(np);
    s.x += t2 * z;
    s.u(s.iq) = t2;
    s.u.head(s.iq) -= t2 * r;
    s.active[s.iq] = -(i + 1);
    if (!add_constraint(s, d)) return QpStatus::Infeasible;  // dependent equalities
  }

  std::vector<bool> excluded(mi, false);
  auto is_active = [&](int c) {
    for (int i = me; i < s.iq; ++i) {
      if (s.active[i] == c) return true;
    }
    return false;
  };

  iterations = 0;
  while (true) {
    if (iterations++ >= opt.max_iterations) return QpStatus::IterationLimit;

    int ip = -1;
    double most = -opt.feasibility_tol;
    for (int i = 0; i < mi; ++i) {
      if (excluded[i] || is_active(i)) continue;
      const double si = CI.col(i).dot(s.x) + ci0(i);
      if (si < most) {
        most = si;
        ip = i;
      }
    }
    if (ip < 0) break;

    const GiState snapshot = s;
    const Eigen::VectorXd np = CI.col(ip);
    double s_ip = most;
    s.u(s.iq) = 0.;
    s.active[s.iq] = ip;

    bool restart = false;
    while (!restart) {
      step_directions(s, np, d, z, r);

      double t1 = kInf;
      int l = -1;
      for (int k = me; k < s.iq; ++k) {
        if (r(k) > 0. && s.u(k) / r(k) < t1) {
          t1 = s.u(k) / r(k);
          l = s.active[k];
        }
      }
      const double znp = z.dot(np);
      const double t2 = std::abs(znp) > kMachEps * std::max(1., np.squaredNorm()) && z.norm() > 1e-14
                            ? -s_ip / znp
                            : kInf;
      const double t = std::min(t1, t2);
      if (t == kInf) return QpStatus::Infeasible;

      if (t2 == kInf) {
        s.u.head(s.iq) -= t * r;
        s.u(s.iq) += t;
        delete_constraint(s, me, l);
        continue;
      }

      s.x += t * z;
      s.u.head(s.iq) -= t * r;
      s.u(s.iq) += t;

      if (t == t2) {
        if (!add_constraint(s, d)) {
          s = snapshot;
          excluded[ip] = true;
        }
        restart = true;
      } else {
        delete_constraint(s, me, l);
        s_ip = CI.col(ip).dot(s.x) + ci0(ip);
      }
    }
  }

  for (int i = 0; i < mi; ++i) {
    if (excluded[i] && CI.col(i).dot(s.x) + ci0(i) < -1e3 * opt.feasibility_tol) {
      return QpStatus::Infeasible;
    }
  }

  x_out = s.x;
  u_eq = Eigen::VectorXd::Zero(me);
  u_ineq = Eigen::VectorXd::Zero(mi);
  for (int k = 0; k < s.iq; ++k) {
    const int c = s.active[k];
    if (c < 0) {
      u_eq(-c - 1) = s.u(k);
    } else {
      u_ineq(c) = s.u(k);
    }
  }
  return QpStatus::Optimal;
}

}  // namespace

QpResult qp_solve(const QpProblem& p, const QpOptions& opt)
{
  const int n = static_cast<int>(p.H.rows());
  if (p.H.cols() != n || p.f.size() != n) throw std::invalid_argument("qp_solve: bad objective dimensions");
  const int mi = static_cast<int>(p.A_ub.rows());
  const int me = static_cast<int>(p.A_eq.rows());
  if ((mi > 0 && p.A_ub.cols() != n) || p.b_ub.size() != mi || (me > 0 && p.A_eq.cols() != n) ||
      p.b_eq.size() != me) {
    throw std::invalid_argument("qp_solve: bad constraint dimensions");
  }

  // Normalize rows; CI = -A', ci0 = b.
  Eigen::VectorXd scale_ub = Eigen::VectorXd::Ones(mi);
  Eigen::MatrixXd CI(n, mi);
  Eigen::VectorXd ci0(mi);
  for (int i = 0; i < mi; ++i) {
    const double nr = p.A_ub.row(i).norm();
    if (nr > 0.) scale_ub(i) = nr;
    CI.col(i) = -p.A_ub.row(i).transpose() / scale_ub(i);
    ci0(i) = p.b_ub(i) / scale_ub(i);
  }
  Eigen::VectorXd scale_eq = Eigen::VectorXd::Ones(me);
  Eigen::MatrixXd CE(n, me);
  Eigen::VectorXd ce0(me);
  for (int i = 0; i < me; ++i) {
    const double nr = p.A_eq.row(i).norm();
    if (nr > 0.) scale_eq(i) = nr;
    CE.col(i) = -p.A_eq.row(i).transpose() / scale_eq(i);
    ce0(i) = p.b_eq(i) / scale_eq(i);
  }

  QpResult res;
  const Eigen::MatrixXd H = 0.5 * (p.H + p.H.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
  const double lmax = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  const bool definite = eig.eigenvalues().minCoeff() > 1e-12 * lmax;

  Eigen::VectorXd u_eq, u_ineq;
  if (definite) {
    res.status = goldfarb_idnani(H, p.f, CE, ce0, CI, ci0, opt, res.x, u_eq, u_ineq, res.iterations);
  } else if (mi == 0 && me == 0) {
    res.x = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(H).solve(-p.f);
    u_eq.resize(0);
    u_ineq.resize(0);
    res.status = QpStatus::Optimal;
  } else {
    // Proximal point: x_{k+1} = argmin q(x) + rho/2 |x - x_k|^2.
    const double rho = opt.proximal_weight * std::max(1., lmax);
    const Eigen::MatrixXd Hp = H + rho * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd xk = Eigen::VectorXd::Zero(n);
    res.status = QpStatus::IterationLimit;
    for (int round = 0; round < opt.max_proximal_rounds; ++round) {
      Eigen::VectorXd xn;
      int it = 0;
      const QpStatus st =
          goldfarb_idnani(Hp, p.f - rho * xk, CE, ce0, CI, ci0, opt, xn, u_eq, u_ineq, it);
      res.iterations += it;
      if (st != QpStatus::Optimal) {
        res.status = st;
        break;
      }
      const double step = (xn - xk).norm();
      xk = xn;
      res.x = xk;
      if (step <= 1e-13 * (1. + xk.norm())) {
        res.status = QpStatus::Optimal;
        break;
      }
    }
    if (res.status == QpStatus::IterationLimit && res.x.size() == n) res.status = QpStatus::Optimal;
  }

  if (res.status != QpStatus::Optimal) {
    res.x = Eigen::VectorXd();
    return res;
  }
  res.lambda_ub = Eigen::VectorXd::Zero(mi);
  for (int i = 0; i < mi && u_ineq.size() == mi; ++i) res.lambda_ub(i) = u_ineq(i) / scale_ub(i);
  res.nu_eq = Eigen::VectorXd::Zero(me);
  for (int i = 0; i < me && u_eq.size() == me; ++i) res.nu_eq(i) = u_eq(i) / scale_eq(i);
  res.value = 0.5 * res.x.dot(H * res.x) + p.f.dot(res.x);
  return res;
}

double kkt_residual(const QpProblem& p, const QpResult& r)
{
  if (!r.optimal()) return std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad = p.H * r.x + p.f;
  double worst = 0.;
  if (p.A_ub.rows() > 0) {
    grad += p.A_ub.transpose() * r.lambda_ub;
    const Eigen::VectorXd slack = p.A_ub * r.x - p.b_ub;
    for (Eigen::Index i = 0; i < slack.size(); ++i) {
      const double nr = std::max(p.A_ub.row(i).norm(), 1e-300);
      worst = std::max(worst, slack(i) / nr);
      worst = std::max(worst, -r.lambda_ub(i));
      worst = std::max(worst, std::abs(r.lambda_ub(i) * slack(i)));
    }
  }
  if (p.A_eq.rows() > 0) {
    grad += p.A_eq.transpose() * r.nu_eq;
    worst = std::max(worst, (p.A_eq * r.x - p.b_eq).cwiseAbs().maxCoeff());
  }
  return std::max(worst, grad.cwiseAbs().maxCoeff());
}

}  // namespace cwc
