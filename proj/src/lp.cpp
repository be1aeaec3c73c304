#include "cwc/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cwc {

const char* to_string(LpStatus s)
{
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::IterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

namespace {

// Standard-form tableau: rows 0..m-1 are constraints, row m holds reduced
// costs; the last column is the right-hand side.
class Tableau
{
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis, int n_cols, const LpOptions& opt)
      : t_(std::move(t)), basis_(std::move(basis)), n_cols_(n_cols), opt_(opt)
  {
  }

  int rows() const { return static_cast<int>(basis_.size()); }
  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }
  double rhs(int i) const { return t_(i, n_cols_); }

  void pivot(int r, int c)
  {
    const Eigen::RowVectorXd pr = t_.row(r) / t_(r, c);
    const Eigen::VectorXd pc = t_.col(c);
    t_.noalias() -= pc * pr;
    t_.row(r) = pr;
    basis_[r] = c;
  }

  // Runs simplex iterations on columns [0, allowed). Returns Optimal,
  // Unbounded or IterationLimit.
  LpStatus optimize(int allowed, int& iterations)
  {
    const int m = rows();
    int degenerate_run = 0;
    while (true) {
      if (iterations >= opt_.max_iterations) return LpStatus::IterationLimit;
      const bool bland = degenerate_run >= opt_.degenerate_switch;

      int enter = -1;
      double best = -opt_.eps;
      for (int j = 0; j < allowed; ++j) {
        const double d = t_(m, j);
        if (d < best) {
          enter = j;
          if (bland) break;
          best = d;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a <= opt_.eps) continue;
        const double ratio = std::max(t_(i, n_cols_), 0.) / a;
        if (leave < 0) {
          best_ratio = ratio;
          leave = i;
          continue;
        }
        const double tie = 1e-12 * std::max(1., best_ratio);
        if (ratio < best_ratio - tie ||
            (std::abs(ratio - best_ratio) <= tie && basis_[i] < basis_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;

      degenerate_run = best_ratio <= opt_.eps ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
  int n_cols_;
  const LpOptions& opt_;
};

}  // namespace

LpResult lp_solve(const LpProblem& p, const LpOptions& opt)
{
  const int n = static_cast<int>(p.cost.size());
  const int m_ub = static_cast<int>(p.A_ub.rows());
  const int m_eq = static_cast<int>(p.A_eq.rows());
  if ((m_ub > 0 && p.A_ub.cols() != n) || (m_eq > 0 && p.A_eq.cols() != n) ||
      p.b_ub.size() != m_ub || p.b_eq.size() != m_eq ||
      (!p.nonneg.empty() && static_cast<int>(p.nonneg.size()) != n)) {
    throw std::invalid_argument("lp_solve: inconsistent problem dimensions");
  }

  // Column layout: structural columns (free variables split in two), then one
  // slack per inequality row, then artificials.
  std::vector<int> pos_col(n), neg_col(n, -1);
  int n_struct = 0;
  for (int j = 0; j < n; ++j) {
    pos_col[j] = n_struct++;
    if (p.nonneg.empty() || !p.nonneg[j]) neg_col[j] = n_struct++;
  }
  const int m = m_ub + m_eq;
  const int slack0 = n_struct;

  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(m, n_struct + m_ub);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const bool ub = i < m_ub;
    const auto a = ub ? p.A_ub.row(i) : p.A_eq.row(i - m_ub);
    double scale = a.cwiseAbs().maxCoeff();
    if (!(scale > 0.)) scale = 1.;
    for (int j = 0; j < n; ++j) {
      rows(i, pos_col[j]) = a(j) / scale;
      if (neg_col[j] >= 0) rows(i, neg_col[j]) = -a(j) / scale;
    }
    if (ub) rows(i, slack0 + i) = 1.;
    rhs(i) = (ub ? p.b_ub(i) : p.b_eq(i - m_ub)) / scale;
    if (rhs(i) < 0.) {
      rows.row(i) *= -1.;
      rhs(i) *= -1.;
    }
  }

  // Rows whose slack has coefficient +1 start with the slack basic; every
  // other row gets an artificial.
  std::vector<int> basis(m, -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (i < m_ub && rows(i, slack0 + i) > 0.) {
      basis[i] = slack0 + i;
    } else {
      ++n_art;
    }
  }
  const int art0 = n_struct + m_ub;
  const int n_cols = art0 + n_art;

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, n_cols + 1);
  t.topLeftCorner(m, n_struct + m_ub) = rows;
  t.col(n_cols).head(m) = rhs;
  {
    int a = 0;
    for (int i = 0; i < m; ++i) {
      if (basis[i] < 0) {
        t(i, art0 + a) = 1.;
        basis[i] = art0 + a;
        ++a;
      }
    }
  }

  LpResult result;
  result.x = Eigen::VectorXd::Zero(n);
  const double feas_tol = opt.eps * (1. + (m > 0 ? rhs.cwiseAbs().maxCoeff() : 0.));

  Tableau tab(std::move(t), std::move(basis), n_cols, opt);
  auto& T = tab.data();

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (int i = 0; i < m; ++i) {
      if (tab.basis()[i] >= art0) T.row(m) -= T.row(i);
    }
    for (int j = art0; j < n_cols; ++j) T(m, j) = 0.;
    const LpStatus s1 = tab.optimize(art0, result.iterations);
    if (s1 == LpStatus::IterationLimit) {
      result.status = s1;
      return result;
    }
    if (-T(m, n_cols) > feas_tol) {
      result.status = LpStatus::Infeasible;
      return result;
    }
    // Drive remaining artificials out of the basis; rows where that is
    // impossible are linearly dependent and stay inert.
    for (int i = 0; i < m; ++i) {
      if (tab.basis()[i] < art0) continue;
      int best = -1;
      double best_abs = 1e-9;
      for (int j = 0; j < art0; ++j) {
        if (std::abs(T(i, j)) > best_abs) {
          best_abs = std::abs(T(i, j));
          best = j;
        }
      }
      if (best >= 0) tab.pivot(i, best);
    }
  }

  // Phase 2 objective row.
  T.row(m).setZero();
  for (int j = 0; j < n; ++j) {
    T(m, pos_col[j]) = p.cost(j);
    if (neg_col[j] >= 0) T(m, neg_col[j]) = -p.cost(j);
  }
  for (int i = 0; i < m; ++i) {
    const int b = tab.basis()[i];
    const double cb = T(m, b);
    if (b < art0 && cb != 0.) T.row(m) -= cb * T.row(i);
  }
  const LpStatus s2 = tab.optimize(art0, result.iterations);
  if (s2 != LpStatus::Optimal) {
    result.status = s2;
    return result;
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(n_cols);
  for (int i = 0; i < m; ++i) y(tab.basis()[i]) = std::max(tab.rhs(i), 0.);
  for (int j = 0; j < n; ++j) {
    result.x(j) = y(pos_col[j]) - (neg_col[j] >= 0 ? y(neg_col[j]) : 0.);
  }
  result.value = p.cost.dot(result.x);
  result.status = LpStatus::Optimal;
  return result;
}

bool lp_feasible(const Eigen::MatrixXd& A_ub, const Eigen::VectorXd& b_ub,
                 const Eigen::MatrixXd& A_eq, const Eigen::VectorXd& b_eq,
                 const LpOptions& options)
{
  LpProblem p;
  const Eigen::Index n = A_ub.rows() > 0 ? A_ub.cols() : A_eq.cols();
  p.cost = Eigen::VectorXd::Zero(n);
  p.A_ub = A_ub;
  p.b_ub = b_ub;
  p.A_eq = A_eq.rows() > 0 ? A_eq : Eigen::MatrixXd(0, n);
  p.b_eq = b_eq.size() > 0 ? b_eq : Eigen::VectorXd(0);
  if (p.A_ub.rows() == 0) p.A_ub = Eigen::MatrixXd(0, n);
  return lp_solve(p, options).status == LpStatus::Optimal;
}

}  // namespace cwc
