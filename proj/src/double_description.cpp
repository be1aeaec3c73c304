#include "cwc/double_description.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "cwc/lp.hpp"

namespace cwc {

namespace {

// Set of constraint indices tight at a ray.
class ZeroSet
{
 public:
  explicit ZeroSet(int n = 0) : words_((n + 63) / 64, 0) {}

  void set(int i) { words_[i / 64] |= (uint64_t{1} << (i % 64)); }

  int count() const
  {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  ZeroSet operator&(const ZeroSet& o) const
  {
    ZeroSet r = *this;
    for (size_t k = 0; k < words_.size(); ++k) r.words_[k] &= o.words_[k];
    return r;
  }

  bool subset_of(const ZeroSet& o) const
  {
    for (size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & ~o.words_[k]) return false;
    }
    return true;
  }

 private:
  std::vector<uint64_t> words_;
};

struct Ray
{
  Eigen::VectorXd y;
  ZeroSet zeros;
};

struct ExtremeRays
{
  std::vector<Eigen::VectorXd> rays;
  std::vector<Eigen::VectorXd> lines;
  int rank = 0;
  bool ill_conditioned = false;
};

// Extreme rays and lineality basis of {x : M x <= 0}.
ExtremeRays extreme_rays(const Eigen::MatrixXd& M, const DdOptions& opt)
{
  const int d = static_cast<int>(M.cols());
  const int m = static_cast<int>(M.rows());
  ExtremeRays out;

  if (m == 0) {
    for (int k = 0; k < d; ++k) out.lines.push_back(Eigen::VectorXd::Unit(d, k));
    return out;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.;
  int r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > opt.rank_tol * std::max(smax, 1e-300)) ++r;
    const double rel = smax > 0. ? sv(k) / smax : 0.;
    if (rel > 1e-14 && rel < 1e-6) out.ill_conditioned = true;
  }
  out.rank = r;
  const Eigen::MatrixXd V = svd.matrixV();
  for (int k = r; k < d; ++k) out.lines.push_back(V.col(k));
  if (r == 0) return out;

  const Eigen::MatrixXd Q = V.leftCols(r);
  Eigen::MatrixXd Mr = M * Q;
  std::vector<bool> trivial(m, false);
  for (int i = 0; i < m; ++i) {
    const double nr = Mr.row(i).norm();
    if (nr <= opt.zero_tol) {
      trivial[i] = true;
    } else {
      Mr.row(i) /= nr;
    }
  }

  // Initial simplicial cone from r independent rows.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Mr.transpose());
  std::vector<int> basis;
  for (int k = 0; k < r; ++k) basis.push_back(qr.colsPermutation().indices()(k));
  std::sort(basis.begin(), basis.end());
  Eigen::MatrixXd MB(r, r);
  for (int k = 0; k < r; ++k) MB.row(k) = Mr.row(basis[k]);
  const Eigen::MatrixXd Y = -MB.fullPivLu().inverse();

  std::vector<Ray> rays;
  for (int k = 0; k < r; ++k) {
    Ray ray{Y.col(k).normalized(), ZeroSet(m)};
    for (int j = 0; j < r; ++j) {
      if (j != k) ray.zeros.set(basis[j]);
    }
    rays.push_back(std::move(ray));
  }

  std::vector<bool> in_basis(m, false);
  for (int b : basis) in_basis[b] = true;

  for (int i = 0; i < m; ++i) {
    if (in_basis[i] || trivial[i]) continue;
    const Eigen::RowVectorXd a = Mr.row(i);

    std::vector<double> val(rays.size());
    std::vector<int> pos, neg, zero;
    for (size_t k = 0; k < rays.size(); ++k) {
      val[k] = a.dot(rays[k].y);
      if (val[k] > opt.zero_tol) {
        pos.push_back(static_cast<int>(k));
      } else if (val[k] < -opt.zero_tol) {
        neg.push_back(static_cast<int>(k));
      } else {
        zero.push_back(static_cast<int>(k));
      }
    }
    if (pos.empty()) {
      for (int k : zero) rays[k].zeros.set(i);
      continue;
    }

    std::vector<Ray> next;
    next.reserve(neg.size() + zero.size() + pos.size() * neg.size() / 2);
    for (int p : pos) {
      for (int n : neg) {
        const ZeroSet common = rays[p].zeros & rays[n].zeros;
        if (common.count() < r - 2) continue;
        bool adjacent = true;
        for (size_t w = 0; w < rays.size() && adjacent; ++w) {
          if (static_cast<int>(w) == p || static_cast<int>(w) == n) continue;
          if (common.subset_of(rays[w].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        Ray nr{(val[p] * rays[n].y - val[n] * rays[p].y).normalized(), common};
        nr.zeros.set(i);
        next.push_back(std::move(nr));
      }
    }
    for (int k : neg) next.push_back(std::move(rays[k]));
    for (int k : zero) {
      rays[k].zeros.set(i);
      next.push_back(std::move(rays[k]));
    }
    rays = std::move(next);
  }

  for (const auto& ray : rays) {
    Eigen::VectorXd x = Q * ray.y;
    x.normalize();
    bool dup = false;
    for (const auto& o : out.rays) {
      if ((o - x).norm() < 1e-8) {
        dup = true;
        break;
      }
    }
    if (!dup) out.rays.push_back(x);
  }
  return out;
}

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& rays,
                           const std::vector<Eigen::VectorXd>& lines, int d)
{
  Eigen::MatrixXd out(rays.size() + 2 * lines.size(), d);
  Eigen::Index k = 0;
  for (const auto& r : rays) out.row(k++) = r.transpose();
  for (const auto& l : lines) {
    out.row(k++) = l.transpose();
    out.row(k++) = -l.transpose();
  }
  return out;
}

}  // namespace

bool PolyCone::contains(const Eigen::VectorXd& x, double tol) const
{
  if (rep == Rep::Halfspace) {
    if (rows.rows() == 0) return true;
    return (rows * x).maxCoeff() <= tol * std::max(1., x.norm());
  }
  // x = rows' * lambda, lambda >= 0.
  const int n = static_cast<int>(rows.rows());
  if (n == 0) return x.norm() <= tol;
  LpProblem lp;
  lp.cost = Eigen::VectorXd::Zero(n);
  lp.A_ub.resize(0, n);
  lp.b_ub.resize(0);
  lp.A_eq = rows.transpose();
  lp.b_eq = x;
  lp.nonneg.assign(n, true);
  LpOptions o;
  o.eps = std::max(tol, 1e-12);
  return lp_solve(lp, o).optimal();
}

DdResult double_description(const PolyCone& input, const DdOptions& options)
{
  const int d = input.dim();
  if (d == 0) throw std::invalid_argument("double_description: zero-dimensional cone");
  const ExtremeRays er = extreme_rays(input.rows, options);

  DdResult res;
  res.rank = er.rank;
  res.rank_deficient = er.rank < d;
  res.ill_conditioned = er.ill_conditioned;
  Eigen::MatrixXd rows = stack_rows(er.rays, er.lines, d);
  if (input.rep == PolyCone::Rep::Generator && options.prune_with_lp) {
    rows = prune_redundant_halfspaces(rows);
  }
  res.cone.rep = input.rep == PolyCone::Rep::Halfspace ? PolyCone::Rep::Generator
                                                       : PolyCone::Rep::Halfspace;
  res.cone.rows = std::move(rows);
  return res;
}

Eigen::MatrixXd prune_redundant_halfspaces(const Eigen::MatrixXd& A, double tol)
{
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  std::vector<bool> keep(m, true);
  for (int i = 0; i < m; ++i) {
    std::vector<int> others;
    for (int j = 0; j < m; ++j) {
      if (j != i && keep[j]) others.push_back(j);
    }
    LpProblem lp;
    lp.cost = -A.row(i).transpose();
    lp.A_ub.resize(others.size() + 1, d);
    for (size_t k = 0; k < others.size(); ++k) lp.A_ub.row(k) = A.row(others[k]);
    lp.A_ub.row(others.size()) = A.row(i);
    lp.b_ub = Eigen::VectorXd::Zero(others.size() + 1);
    lp.b_ub(others.size()) = 1.;
    lp.A_eq.resize(0, d);
    lp.b_eq.resize(0);
    const LpResult r = lp_solve(lp);
    if (r.optimal() && -r.value <= tol) keep[i] = false;
  }
  Eigen::MatrixXd out(std::count(keep.begin(), keep.end(), true), d);
  Eigen::Index k = 0;
  for (int i = 0; i < m; ++i) {
    if (keep[i]) out.row(k++) = A.row(i);
  }
  return out;
}

}  // namespace cwc
