#include "cwc/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cwc/lp.hpp"

namespace cwc {

const char* to_string(HullKind k)
{
  switch (k) {
    case HullKind::Polygon:
      return "polygon";
    case HullKind::Segment:
      return "segment";
    case HullKind::Point:
      return "point";
  }
  return "unknown";
}

const char* to_string(RegionKind k)
{
  switch (k) {
    case RegionKind::Polygon:
      return "polygon";
    case RegionKind::Segment:
      return "segment";
    case RegionKind::Point:
      return "point";
    case RegionKind::Empty:
      return "empty";
    case RegionKind::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b)
{
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Strict left turn, with collinearity judged relative to the edge lengths.
bool left_turn(const Vec2& o, const Vec2& a, const Vec2& b, double eps)
{
  const double c = cross2(o, a, b);
  return c > eps * std::max((a - o).norm() * (b - o).norm(), 1e-300);
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b)
{
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0., 1.);
  return (p - (a + t * ab)).norm();
}

}  // namespace

Hull2d convex_hull_2d(const std::vector<Vec2>& points, double eps)
{
  if (points.empty()) throw std::invalid_argument("convex_hull_2d: empty point set");

  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    const Vec2& p = points[i];
    const Vec2& q = points[j];
    return p.x() < q.x() || (p.x() == q.x() && (p.y() < q.y() || (p.y() == q.y() && i < j)));
  });

  double scale = 0.;
  for (const auto& p : points) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double merge_tol = eps * std::max(scale, 1.);
  std::vector<int> uniq;
  uniq.reserve(order.size());
  for (int i : order) {
    if (!uniq.empty() && (points[i] - points[uniq.back()]).norm() <= merge_tol) continue;
    uniq.push_back(i);
  }

  Hull2d hull;
  if (uniq.size() == 1) {
    hull.kind = HullKind::Point;
    hull.indices = uniq;
    hull.vertices = {points[uniq[0]]};
    return hull;
  }

  // Exact orientation in the chain keeps it consistent with the sort order;
  // near-collinear vertices are removed afterwards on the closed polygon.
  const int n = static_cast<int>(uniq.size());
  std::vector<int> h(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k >= 2 && !left_turn(points[h[k - 2]], points[h[k - 1]], points[uniq[i]], 0.)) --k;
    h[k++] = uniq[i];
  }
  for (int i = n - 2, t = k + 1; i >= 0; --i) {
    while (k >= t && !left_turn(points[h[k - 2]], points[h[k - 1]], points[uniq[i]], 0.)) --k;
    h[k++] = uniq[i];
  }
  h.resize(std::max(k - 1, 1));  // last point repeats the first
  const std::vector<int> chain = h;

  bool removed = true;
  while (removed && h.size() > 2) {
    removed = false;
    for (size_t i = 0; i < h.size() && h.size() > 2; ++i) {
      const int a = h[(i + h.size() - 1) % h.size()], b = h[i], c = h[(i + 1) % h.size()];
      if (!left_turn(points[a], points[b], points[c], eps)) {
        h.erase(h.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
  }

  if (h.size() <= 2) {
    hull.kind = HullKind::Segment;
    int bi = chain[0], bj = chain[0];
    double best = -1.;
    for (int i : chain) {
      for (int j : chain) {
        const double d2 = (points[i] - points[j]).squaredNorm();
        if (d2 > best) {
          best = d2;
          bi = i;
          bj = j;
        }
      }
    }
    const Vec2 &pi = points[bi], &pj = points[bj];
    const bool i_first = pi.x() < pj.x() || (pi.x() == pj.x() && pi.y() <= pj.y());
    hull.indices = i_first ? std::vector<int>{bi, bj} : std::vector<int>{bj, bi};
  } else {
    hull.kind = HullKind::Polygon;
    hull.indices = h;
  }
  for (int i : hull.indices) hull.vertices.push_back(points[i]);
  return hull;
}

PolarPolygon polar_vertex_enum(const Eigen::MatrixXd& B, double eps)
{
  if (B.cols() != 2) throw std::invalid_argument("polar_vertex_enum: B must have two columns");
  std::vector<Vec2> pts;
  pts.reserve(B.rows());
  for (Eigen::Index i = 0; i < B.rows(); ++i) pts.emplace_back(B(i, 0), B(i, 1));

  PolarPolygon out;
  if (pts.empty()) {
    out.status = PolarStatus::Unbounded;
    out.open_directions = {Vec2::UnitX(), Vec2::UnitY(), -Vec2::UnitX(), -Vec2::UnitY()};
    return out;
  }
  const Hull2d hull = convex_hull_2d(pts, eps);
  out.row_indices = hull.indices;

  if (hull.kind != HullKind::Polygon) {
    out.status = PolarStatus::Unbounded;
    const Vec2 dir = hull.kind == HullKind::Segment ? Vec2(hull.vertices[1] - hull.vertices[0])
                                                    : hull.vertices[0];
    if (dir.norm() > 0.) {
      const Vec2 perp(-dir.y(), dir.x());
      out.open_directions = {perp.normalized(), -perp.normalized()};
    } else {
      out.open_directions = {Vec2::UnitX(), Vec2::UnitY(), -Vec2::UnitX(), -Vec2::UnitY()};
    }
    return out;
  }

  const auto& v = hull.vertices;
  const int h = static_cast<int>(v.size());
  for (int k = 0; k < h; ++k) {
    const Vec2& p = v[k];
    const Vec2& q = v[(k + 1) % h];
    // The origin must lie strictly left of every hull edge.
    const double c = p.x() * q.y() - p.y() * q.x();
    if (c <= eps * std::max(p.norm() * q.norm(), 1e-300)) {
      const Vec2 e = q - p;
      out.open_directions.push_back(Vec2(e.y(), -e.x()).normalized());
    }
  }
  if (!out.open_directions.empty()) {
    out.status = PolarStatus::Unbounded;
    return out;
  }

  out.status = PolarStatus::Bounded;
  out.vertices.reserve(h);
  for (int k = 0; k < h; ++k) {
    const Vec2& p = v[k];
    const Vec2& q = v[(k + 1) % h];
    const double det = p.x() * q.y() - p.y() * q.x();
    out.vertices.emplace_back((q.y() - p.y()) / det, (p.x() - q.x()) / det);
  }
  return out;
}

double polygon_area(const std::vector<Vec2>& poly)
{
  const size_t n = poly.size();
  if (n < 3) return 0.;
  double a = 0.;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * a;
}

double distance_to_convex(const Vec2& p, const std::vector<Vec2>& poly)
{
  const size_t n = poly.size();
  if (n == 0) throw std::invalid_argument("distance_to_convex: empty polygon");
  if (n == 1) return (p - poly[0]).norm();
  if (n == 2) return segment_distance(p, poly[0], poly[1]);
  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    if (cross2(a, b, p) < 0.) inside = false;
    best = std::min(best, segment_distance(p, a, b));
  }
  return inside ? 0. : best;
}

double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b)
{
  double d = 0.;
  for (const auto& p : a) d = std::max(d, distance_to_convex(p, b));
  for (const auto& p : b) d = std::max(d, distance_to_convex(p, a));
  return d;
}

HPolytope polygon_halfplanes(const std::vector<Vec2>& poly)
{
  const int n = static_cast<int>(poly.size());
  HPolytope h;
  h.A.resize(n, 2);
  h.b.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const Vec2 e = b - a;
    const Vec2 normal = Vec2(e.y(), -e.x()).normalized();
    h.A.row(i) = normal.transpose();
    h.b(i) = normal.dot(a);
  }
  return h;
}

namespace {

constexpr double kInteriorTol = 1e-9;

// Extreme points of a thin region in eight directions; nullopt if unbounded.
std::optional<std::vector<Vec2>> extreme_points(const Eigen::MatrixXd& C, const Eigen::VectorXd& d)
{
  std::vector<Vec2> pts;
  for (int k = 0; k < 8; ++k) {
    const double a = M_PI * k / 4.;
    LpProblem lp;
    lp.cost = -Vec2(std::cos(a), std::sin(a));
    lp.A_ub = C;
    lp.b_ub = d;
    lp.A_eq.resize(0, 2);
    lp.b_eq.resize(0);
    const LpResult r = lp_solve(lp);
    if (r.status == LpStatus::Unbounded) return std::nullopt;
    if (r.optimal()) pts.emplace_back(r.x(0), r.x(1));
  }
  return pts;
}

}  // namespace

Region2d halfplane_intersection(const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                                const std::optional<Vec2>& hint, double eps)
{
  if (C.cols() != 2 || C.rows() != d.size()) {
    throw std::invalid_argument("halfplane_intersection: expected m x 2 rows and m offsets");
  }
  Region2d out;

  // Rows with a vanishing normal are either void or contradictory.
  const double cmax = C.rows() > 0 ? C.rowwise().norm().maxCoeff() : 0.;
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < C.rows(); ++i) {
    const double n = C.row(i).norm();
    if (n > 1e-12 * std::max(cmax, 1e-300)) {
      keep.push_back(static_cast<int>(i));
    } else if (d(i) < -kInteriorTol) {
      out.kind = RegionKind::Empty;
      return out;
    }
  }
  if (keep.empty()) {
    out.kind = RegionKind::Unbounded;
    return out;
  }
  const int m = static_cast<int>(keep.size());
  Eigen::MatrixXd Cn(m, 2);
  Eigen::VectorXd dn(m);
  for (int k = 0; k < m; ++k) {
    const double n = C.row(keep[k]).norm();
    Cn.row(k) = C.row(keep[k]) / n;
    dn(k) = d(keep[k]) / n;
  }

  Vec2 center;
  if (hint && (dn - Cn * *hint).minCoeff() > kInteriorTol) {
    center = *hint;
    out.centered_on_hint = true;
  } else {
    const ChebyshevBall ball = chebyshev_center(HPolytope{Cn, dn});
    if (ball.status == ChebyshevStatus::Infeasible) {
      out.kind = RegionKind::Empty;
      return out;
    }
    if (ball.status == ChebyshevStatus::Unbounded) {
      out.kind = RegionKind::Unbounded;
      return out;
    }
    center = ball.center;
    if (ball.radius <= kInteriorTol) {
      const auto pts = extreme_points(Cn, dn);
      if (!pts) {
        out.kind = RegionKind::Unbounded;
        return out;
      }
      if (pts->empty()) {
        out.kind = RegionKind::Empty;
        return out;
      }
      const Hull2d h = convex_hull_2d(*pts, 1e-7);
      out.kind = h.kind == HullKind::Point     ? RegionKind::Point
                 : h.kind == HullKind::Segment ? RegionKind::Segment
                                               : RegionKind::Polygon;
      out.vertices = h.vertices;
      out.center = center;
      return out;
    }
  }
  out.center = center;

  Eigen::MatrixXd B(m, 2);
  const Eigen::VectorXd slack = dn - Cn * center;
  for (int k = 0; k < m; ++k) B.row(k) = Cn.row(k) / slack(k);
  const PolarPolygon p = polar_vertex_enum(B, eps);
  if (p.status == PolarStatus::Unbounded) {
    out.kind = RegionKind::Unbounded;
    return out;
  }
  out.kind = RegionKind::Polygon;
  for (const auto& v : p.vertices) out.vertices.push_back(v + center);
  for (int r : p.row_indices) out.rows.push_back(keep[r]);
  return out;
}

}  // namespace cwc
