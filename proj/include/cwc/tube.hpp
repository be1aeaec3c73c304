#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "cwc/contact.hpp"
#include "cwc/geometry.hpp"
#include "cwc/polygon.hpp"
#include "cwc/polytope.hpp"
#include "cwc/stability.hpp"

namespace cwc {

inline constexpr double kDefaultTubeRadius = 0.05;

/// Convex polyhedron bounding the COM over a preview segment.
struct Tube
{
  /// Extreme points.
  std::vector<Vec3> vertices;
  /// World-frame halfspaces A x <= b, unit rows.
  HPolytope hrep;
  Vec3 p0 = Vec3::Zero();
  Vec3 p1 = Vec3::Zero();
  double radius = kDefaultTubeRadius;
  /// Interior point (segment midpoint) used to normalize the halfspaces.
  Vec3 center = Vec3::Zero();

  bool contains(const Vec3& x, double tol = 1e-9) const { return hrep.contains(x, tol); }
  /// Rows B with B (x - center) <= 1.
  Eigen::MatrixXd normalized_rows() const;
};

/// Cross-section axes (u, v) perpendicular to `dir`: Gram-Schmidt of world x
/// against dir, world y when dir is within ~8 degrees of x.
std::pair<Vec3, Vec3> cross_section_frame(const Vec3& dir);

/// Square cross-sections of half-width `radius` at both ends of [p0, p1],
/// perpendicular to `axis` (default p1 - p0). A segment shorter than 1e-9
/// gives an axis-aligned cube. Throws std::invalid_argument if radius <= 0.
Tube build_tube(const Vec3& p0, const Vec3& p1, double radius = kDefaultTubeRadius,
                const std::optional<Vec3>& axis = std::nullopt);

/// Hull of a tube and one more square cross-section centered at `at`, with
/// the squares perpendicular to `axis`. The segment becomes the span of the
/// old one and `at`.
Tube extend_tube(const Tube& t, const Vec3& at, const Vec3& axis);

/// Hull of arbitrary points; `p0`, `p1` record the segment it covers.
Tube tube_from_points(const std::vector<Vec3>& points, const Vec3& p0, const Vec3& p1,
                      double radius);

/// Accelerations feasible everywhere in a tube: I_T = {p'' : C_T (p'' - g) <= 0}.
struct TubeCone
{
  ConeStatus status = ConeStatus::Empty;
  /// Stacked rows a_O + a x nu over every vertex nu and cone row.
  Eigen::MatrixXd raw;
  /// Minimal subset of `raw`.
  Eigen::MatrixXd reduced;
  /// Rays (x~, y~, 1) from the apex (0, 0, -g).
  std::vector<Vec3> rays;
  /// Cross-section in (x~, y~).
  Region2d section;

  bool nonempty() const { return status != ConeStatus::Empty; }
};

/// Builds C_T and reduces it through the polar hull of its cross-section.
TubeCone tube_cone(const WrenchCone& cone, const Tube& tube);

/// Same, for an explicit list of COM positions.
TubeCone tube_cone(const WrenchCone& cone, const std::vector<Vec3>& points);

/// Verdict and per-row values C'_T (p'' - g) of the reduced rows.
ConeMembership cone_membership(const TubeCone& tc, const Vec3& accel, double tol = 1e-9);

}  // namespace cwc
