#include "cwc/stability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cwc/lp.hpp"

namespace cwc {

const char* to_string(ConeStatus s)
{
  switch (s) {
    case ConeStatus::Centered:
      return "centered";
    case ConeStatus::Offset:
      return "offset";
    case ConeStatus::Empty:
      return "empty";
  }
  return "unknown";
}

Eigen::MatrixXd accel_rows(const WrenchCone& cone, const Vec3& p)
{
  Eigen::MatrixXd out(cone.size(), 3);
  for (int i = 0; i < cone.size(); ++i) out.row(i) = dual_twist_at(cone.rows[i], p).transpose();
  return out;
}

StaticPolygon static_polygon(const WrenchCone& cone, double mass)
{
  if (!(mass > 0.)) throw std::invalid_argument("static_polygon: mass must be positive");
  StaticPolygon sp;
  const int L = cone.size();
  sp.planar.resize(L, 2);
  sp.offset.resize(L);
  for (int i = 0; i < L; ++i) {
    const DualTwist& r = cone.rows[i];
    // Static wrench of weight m g: every row scales by m.
    sp.planar.row(i) << -mass * r.a.y(), mass * r.a.x();
    sp.offset(i) = -mass * r.a_o.z();
  }
  sp.region = halfplane_intersection(sp.planar, sp.offset);
  sp.chebyshev = sp.region.center;
  return sp;
}

Eigen::VectorXd slackness(const StaticPolygon& sp, const Vec2& xy)
{
  return sp.offset - sp.planar * xy;
}

bool strictly_inside(const StaticPolygon& sp, const Vec2& xy, double tol)
{
  if (sp.planar.rows() == 0) return true;
  const Eigen::VectorXd s = slackness(sp, xy);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double n = sp.planar.row(i).norm();
    if (n > 0. && s(i) / n <= tol) return false;
    if (n == 0. && s(i) < 0.) return false;
  }
  return true;
}

namespace {

ConeStatus status_of(const Region2d& r)
{
  if (r.kind != RegionKind::Polygon && r.kind != RegionKind::Unbounded) return ConeStatus::Empty;
  return r.centered_on_hint ? ConeStatus::Centered : ConeStatus::Offset;
}

}  // namespace

ZmpArea zmp_area(const WrenchCone& cone, const Vec3& com, double z_plane)
{
  ZmpArea out;
  out.com = com;
  out.h = z_plane - com.z();
  if (out.h == 0.) throw std::invalid_argument("zmp_area: plane through the COM");

  // With f = (mg/h)(dx, dy, h), each row reads a dx + b dy <= h sigma; the
  // inequality flips when h < 0.
  const Eigen::MatrixXd rows = accel_rows(cone, com);
  const double s = out.h > 0. ? 1. : -1.;
  Eigen::MatrixXd C = s * rows.leftCols(2);
  Eigen::VectorXd d = std::abs(out.h) * -rows.col(2);
  out.region = halfplane_intersection(C, d, Vec2::Zero());
  out.status = status_of(out.region);

  out.polar_rows.resize(rows.rows(), 2);
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out.polar_rows.row(i) = rows.row(i).head(2) / (out.h * -rows(i, 2));
  }
  const Vec2 g_xy = com.head<2>();
  for (auto& v : out.region.vertices) v += g_xy;
  out.region.center += g_xy;
  return out;
}

bool AccelCone::contains(const Vec3& accel, double tol) const
{
  if (status == ConeStatus::Empty) return false;
  if (A.rows() == 0) return true;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    if (A.row(i).dot(accel) - b(i) > tol * std::max(1., A.row(i).norm())) return false;
  }
  return true;
}

AccelCone accel_cone(const WrenchCone& cone, const Vec3& com)
{
  AccelCone out;
  const Eigen::MatrixXd rows = accel_rows(cone, com);
  const Eigen::VectorXd sigma = -rows.col(2);
  // a x'' + b y'' <= sigma (g + z''), i.e. a x~ + b y~ <= sigma.
  out.section = halfplane_intersection(rows.leftCols(2), sigma, Vec2::Zero());
  out.status = status_of(out.section);
  if (out.status == ConeStatus::Empty) return out;

  if (out.section.kind == RegionKind::Polygon) {
    for (const auto& v : out.section.vertices) out.rays.emplace_back(v.x(), v.y(), 1.);
    const int k = static_cast<int>(out.section.rows.size());
    out.A.resize(k, 3);
    out.b.resize(k);
    for (int j = 0; j < k; ++j) {
      const int i = out.section.rows[j];
      out.A.row(j) = rows.row(i);
      out.b(j) = kGravity * sigma(i);
    }
  } else {
    out.A = rows;
    out.b = kGravity * sigma;
  }
  return out;
}

namespace {

struct Support
{
  Vec2 dir;
  double h = 0.;
  Vec2 point;
};

class SupportOracle
{
 public:
  SupportOracle(const ContactSet& cs, double weight)
  {
    std::vector<Vec3> rays, moments;
    for (const auto& c : cs.contacts) {
      for (const auto& r : linearize_friction(c).rays) {
        rays.push_back(r);
        moments.push_back(c.position.cross(r));
      }
    }
    const int nr = static_cast<int>(rays.size());
    // Variables (lambda >= 0, x, y); the weight f = (0, 0, W) through the
    // COM gives tau_O = W (y, -x, 0).
    lp_.A_eq = Eigen::MatrixXd::Zero(6, nr + 2);
    lp_.b_eq = Eigen::VectorXd::Zero(6);
    for (int k = 0; k < nr; ++k) {
      lp_.A_eq.block<3, 1>(0, k) = rays[k];
      lp_.A_eq.block<3, 1>(3, k) = moments[k];
    }
    lp_.b_eq(2) = weight;
    lp_.A_eq(3, nr + 1) = -weight;
    lp_.A_eq(4, nr) = weight;
    lp_.A_ub.resize(0, nr + 2);
    lp_.b_ub.resize(0);
    lp_.nonneg.assign(nr + 2, true);
    lp_.nonneg[nr] = lp_.nonneg[nr + 1] = false;
    lp_.cost = Eigen::VectorXd::Zero(nr + 2);
    nr_ = nr;
  }

  LpResult query(const Vec2& d)
  {
    lp_.cost.tail<2>() = -d;
    ++queries;
    return lp_solve(lp_);
  }

  Vec2 point(const LpResult& r) const { return r.x.segment<2>(nr_); }

  int queries = 0;

 private:
  LpProblem lp_;
  int nr_ = 0;
};

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Area between the inner edge (s, t) and the outer vertex where their
// supporting lines meet.
double gap_area(const Support& s, const Support& t)
{
  const Vec2 e = t.point - s.point;
  if (e.norm() <= 1e-12) return 0.;
  const double det = cross2(s.dir, t.dir);
  if (std::abs(det) <= 1e-15) return 0.;
  const Vec2 o((s.h * t.dir.y() - t.h * s.dir.y()) / det, (s.dir.x() * t.h - t.dir.x() * s.h) / det);
  return 0.5 * std::abs(cross2(e, o - s.point));
}

}  // namespace

BretlLallResult bretl_lall_polygon(const ContactSet& cs, double mass, const BretlLallOptions& opt)
{
  if (cs.empty()) throw std::invalid_argument("bretl_lall_polygon: empty contact set");
  if (!(mass > 0.)) throw std::invalid_argument("bretl_lall_polygon: mass must be positive");
  BretlLallResult out;
  SupportOracle oracle(cs, mass * kGravity);

  std::vector<Support> sup;
  for (int k = 0; k < 4; ++k) {
    const Vec2 d(std::cos(M_PI * k / 2.), std::sin(M_PI * k / 2.));
    const LpResult r = oracle.query(d);
    if (r.status == LpStatus::Unbounded) {
      out.region.kind = RegionKind::Unbounded;
      out.lp_queries = oracle.queries;
      return out;
    }
    if (!r.optimal()) {
      out.region.kind = RegionKind::Empty;
      out.lp_queries = oracle.queries;
      return out;
    }
    const Vec2 p = oracle.point(r);
    sup.push_back({d, d.dot(p), p});
  }

  while (oracle.queries < opt.max_queries) {
    const int n = static_cast<int>(sup.size());
    double total = 0., worst = 0.;
    int worst_k = -1;
    for (int k = 0; k < n; ++k) {
      const double g = gap_area(sup[k], sup[(k + 1) % n]);
      total += g;
      if (g > worst) {
        worst = g;
        worst_k = k;
      }
    }
    out.area_gap = total;
    if (total < opt.area_tol || worst_k < 0) break;

    const Support& s = sup[worst_k];
    const Support& t = sup[(worst_k + 1) % n];
    const Vec2 e = t.point - s.point;
    const Vec2 normal = Vec2(e.y(), -e.x()).normalized();
    const LpResult r = oracle.query(normal);
    if (!r.optimal()) break;
    Vec2 p = oracle.point(r);
    // An edge that cannot be pushed out is exact; pin the new support on it.
    if (normal.dot(p) <= normal.dot(s.point) + opt.edge_tol) p = s.point;
    sup.insert(sup.begin() + worst_k + 1, {normal, normal.dot(p), p});
  }

  std::vector<Vec2> pts;
  for (const auto& s : sup) pts.push_back(s.point);
  const Hull2d h = convex_hull_2d(pts, 1e-9);
  out.region.kind = h.kind == HullKind::Point     ? RegionKind::Point
                    : h.kind == HullKind::Segment ? RegionKind::Segment
                                                  : RegionKind::Polygon;
  out.region.vertices = h.vertices;
  out.lp_queries = oracle.queries;
  return out;
}

}  // namespace cwc
