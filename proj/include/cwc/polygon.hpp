#pragma once

#include <optional>
#include <vector>

#include "cwc/geometry.hpp"
#include "cwc/polytope.hpp"

namespace cwc {

/// Collinearity tolerance of 2D hull computations (relative to edge lengths).
inline constexpr double kHullEps = 1e-10;

enum class HullKind
{
  Polygon,
  Segment,
  Point,
};

const char* to_string(HullKind k);

/// Result of a planar hull: CCW polygon, or a degenerate segment / point.
struct Hull2d
{
  HullKind kind = HullKind::Point;
  std::vector<Vec2> vertices;
  /// Index of each vertex in the input list.
  std::vector<int> indices;
};

/// Andrew's monotone chain: CCW vertices, collinear points dropped, O(n log n).
/// Throws std::invalid_argument on an empty input.
Hull2d convex_hull_2d(const std::vector<Vec2>& points, double eps = kHullEps);

enum class PolarStatus
{
  Bounded,
  Unbounded,
};

struct PolarPolygon
{
  PolarStatus status = PolarStatus::Unbounded;
  /// CCW vertices of {x : B x <= 1}.
  std::vector<Vec2> vertices;
  /// Irredundant rows of B in cyclic order; edge k of the polygon lies on
  /// row_indices[k] and joins vertices[k-1] and vertices[k].
  std::vector<int> row_indices;
  /// Recession directions when unbounded.
  std::vector<Vec2> open_directions;
};

/// Vertices of {x : B x <= 1} by hulling the rows of B and intersecting the
/// supporting lines of consecutive extreme rows.
PolarPolygon polar_vertex_enum(const Eigen::MatrixXd& B, double eps = kHullEps);

/// Polygon area (shoelace, positive for CCW).
double polygon_area(const std::vector<Vec2>& poly);

/// Symmetric Hausdorff distance between two convex polygons given by their
/// vertices (segments and points allowed).
double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

/// Distance from p to the convex set conv(poly), zero inside.
double distance_to_convex(const Vec2& p, const std::vector<Vec2>& poly);

/// Halfplane form {x : A x <= b} of a CCW polygon, rows of unit norm.
HPolytope polygon_halfplanes(const std::vector<Vec2>& poly);

enum class RegionKind
{
  Polygon,
  Segment,
  Point,
  Empty,
  Unbounded,
};

const char* to_string(RegionKind k);

/// Planar set {x : C x <= d} in vertex form.
struct Region2d
{
  RegionKind kind = RegionKind::Empty;
  /// CCW vertices (one for a point, two for a segment).
  std::vector<Vec2> vertices;
  /// Irredundant rows of C in cyclic order (polygons only).
  std::vector<int> rows;
  /// Origin of the polar form.
  Vec2 center = Vec2::Zero();
  /// Whether `center` is the hint passed by the caller (else the Chebyshev center).
  bool centered_on_hint = false;

  bool nonempty() const { return kind != RegionKind::Empty; }
};

/// Intersects halfplanes by polar duality. The polar origin is `hint` when it
/// is strictly interior, otherwise the Chebyshev center; sets with empty
/// interior are classified as segment / point through LP extremes.
Region2d halfplane_intersection(const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                                const std::optional<Vec2>& hint = std::nullopt,
                                double eps = kHullEps);

}  // namespace cwc
