#include "cwc/tube.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

#include "cwc/double_description.hpp"

namespace cwc {

std::pair<Vec3, Vec3> cross_section_frame(const Vec3& dir)
{
  const Vec3 d = dir.normalized();
  const Vec3 ref = std::abs(d.x()) > 0.99 ? Vec3::UnitY() : Vec3::UnitX();
  const Vec3 u = (ref - ref.dot(d) * d).normalized();
  return {u, d.cross(u)};
}

namespace {

constexpr double kDegenerateLength = 1e-9;

void add_square(std::vector<Vec3>& out, const Vec3& c, const Vec3& u, const Vec3& v, double r)
{
  for (const double su : {1., -1.}) {
    for (const double sv : {1., -1.}) out.push_back(c + r * (su * u + sv * v));
  }
}

}  // namespace

Eigen::MatrixXd Tube::normalized_rows() const
{
  const Eigen::VectorXd s = hrep.b - hrep.A * center;
  Eigen::MatrixXd B = hrep.A;
  for (Eigen::Index i = 0; i < B.rows(); ++i) B.row(i) /= s(i);
  return B;
}

Tube tube_from_points(const std::vector<Vec3>& points, const Vec3& p0, const Vec3& p1, double radius)
{
  if (points.empty()) throw std::invalid_argument("tube_from_points: no points");
  Tube t;
  t.p0 = p0;
  t.p1 = p1;
  t.radius = radius;
  t.center = 0.5 * (p0 + p1);

  // Homogenized generators (x - c, 1); facets come back as (a, a0) with
  // a . (x - c) <= -a0.
  Eigen::MatrixXd R(points.size(), 4);
  for (size_t i = 0; i < points.size(); ++i) {
    R.row(i).head<3>() = (points[i] - t.center).transpose();
    R(i, 3) = 1.;
  }
  const DdResult dd = double_description(PolyCone::generators(R));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < dd.cone.rows.rows(); ++i) {
    if (dd.cone.rows.row(i).head<3>().norm() > 1e-12) keep.push_back(i);
  }
  t.hrep.A.resize(keep.size(), 3);
  t.hrep.b.resize(keep.size());
  for (size_t k = 0; k < keep.size(); ++k) {
    const Eigen::Vector4d h = dd.cone.rows.row(keep[k]).transpose();
    const double n = h.head<3>().norm();
    t.hrep.A.row(k) = h.head<3>().transpose() / n;
    t.hrep.b(k) = (h.head<3>().dot(t.center) - h(3)) / n;
  }

  // Extreme points are those where active facets span R^3.
  for (const auto& p : points) {
    const Eigen::VectorXd s = t.hrep.b - t.hrep.A * p;
    std::vector<int> active;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (std::abs(s(i)) <= 1e-9) active.push_back(static_cast<int>(i));
    }
    if (active.size() < 3) continue;
    Eigen::MatrixXd M(active.size(), 3);
    for (size_t k = 0; k < active.size(); ++k) M.row(k) = t.hrep.A.row(active[k]);
    if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(M).rank() < 3) continue;
    bool dup = false;
    for (const auto& q : t.vertices) dup = dup || (q - p).norm() <= 1e-12;
    if (!dup) t.vertices.push_back(p);
  }
  return t;
}

Tube build_tube(const Vec3& p0, const Vec3& p1, double radius, const std::optional<Vec3>& axis)
{
  if (!(radius > 0.)) throw std::invalid_argument("build_tube: radius must be positive");
  std::vector<Vec3> pts;
  if ((p1 - p0).norm() < kDegenerateLength) {
    for (const double sz : {1., -1.}) add_square(pts, p0 + sz * radius * Vec3::UnitZ(), Vec3::UnitX(), Vec3::UnitY(), radius);
  } else {
    const auto [u, v] = cross_section_frame(axis.value_or(p1 - p0));
    add_square(pts, p0, u, v, radius);
    add_square(pts, p1, u, v, radius);
  }
  return tube_from_points(pts, p0, p1, radius);
}

Tube extend_tube(const Tube& t, const Vec3& at, const Vec3& axis)
{
  std::vector<Vec3> pts = t.vertices;
  const auto [u, v] = cross_section_frame(axis);
  add_square(pts, at, u, v, t.radius);
  // The extension point becomes whichever end it is closer to along the axis.
  const Vec3 d = axis.normalized();
  Vec3 a = t.p0, b = t.p1;
  if (d.dot(at - a) < 0.) {
    a = at;
  } else if (d.dot(at - b) > 0.) {
    b = at;
  }
  return tube_from_points(pts, a, b, t.radius);
}

TubeCone tube_cone(const WrenchCone& cone, const std::vector<Vec3>& points)
{
  TubeCone tc;
  const int L = cone.size();
  tc.raw.resize(static_cast<Eigen::Index>(L * points.size()), 3);
  for (size_t j = 0; j < points.size(); ++j) tc.raw.middleRows(j * L, L) = accel_rows(cone, points[j]);

  // With z'' > -g each row c . (p'' - g) <= 0 reads c_x x~ + c_y y~ <= -c_z.
  tc.section = halfplane_intersection(tc.raw.leftCols(2), -tc.raw.col(2), Vec2::Zero());
  switch (tc.section.kind) {
    case RegionKind::Polygon: {
      tc.status = tc.section.centered_on_hint ? ConeStatus::Centered : ConeStatus::Offset;
      tc.reduced.resize(tc.section.rows.size(), 3);
      for (size_t k = 0; k < tc.section.rows.size(); ++k) tc.reduced.row(k) = tc.raw.row(tc.section.rows[k]);
      for (const auto& v : tc.section.vertices) tc.rays.emplace_back(v.x(), v.y(), 1.);
      break;
    }
    case RegionKind::Unbounded:
      tc.status = tc.section.centered_on_hint ? ConeStatus::Centered : ConeStatus::Offset;
      tc.reduced = tc.raw;
      break;
    default:
      tc.status = ConeStatus::Empty;
      tc.reduced.resize(0, 3);
      break;
  }
  return tc;
}

TubeCone tube_cone(const WrenchCone& cone, const Tube& tube) { return tube_cone(cone, tube.vertices); }

ConeMembership cone_membership(const TubeCone& tc, const Vec3& accel, double tol)
{
  ConeMembership out;
  const Vec3 w = accel - gravity_vector();
  out.slack = tc.reduced * w;
  if (tc.status == ConeStatus::Empty) return out;
  out.member = accel.z() > -kGravity &&
               (out.slack.size() == 0 || out.slack.maxCoeff() <= tol * std::max(1., w.norm()));
  return out;
}

}  // namespace cwc
