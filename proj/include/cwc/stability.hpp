#pragma once

#include <vector>

#include <Eigen/Core>

#include "cwc/contact.hpp"
#include "cwc/geometry.hpp"
#include "cwc/polygon.hpp"
#include "cwc/polytope.hpp"

namespace cwc {

/// Rows a_G = a_O + a x p of the cone re-expressed at a COM position p. With
/// zero angular momentum about the COM, the contact wrench f = m(p'' - g)
/// is feasible iff a_G . (p'' - g) <= 0 for every row.
Eigen::MatrixXd accel_rows(const WrenchCone& cone, const Vec3& p);

/// Horizontal COM positions sustaining static equilibrium.
struct StaticPolygon
{
  Region2d region;
  /// Halfplanes planar * (x, y) <= offset, one per cone row:
  /// planar = m (-a_y, a_x), offset = -m a_Oz.
  Eigen::MatrixXd planar;
  Eigen::VectorXd offset;
  /// Chebyshev center used as polar origin.
  Vec2 chebyshev = Vec2::Zero();

  HPolytope halfplanes() const { return {planar, offset}; }
};

/// Builds the polygon from the cone rows. `mass` must be positive; it scales
/// the halfplanes but not the region.
StaticPolygon static_polygon(const WrenchCone& cone, double mass = 1.);

/// Per-row slackness sigma = -a_Oz + a_y x - a_x y; all positive iff xy is
/// strictly inside.
Eigen::VectorXd slackness(const StaticPolygon& sp, const Vec2& xy);

/// Whether xy is strictly inside the polygon (min slackness > tol).
bool strictly_inside(const StaticPolygon& sp, const Vec2& xy, double tol = 1e-9);

enum class ConeStatus
{
  /// The cross-section is centered on the natural origin (COM, zero acceleration).
  Centered,
  /// Nonempty, but the natural origin is not interior; recentered.
  Offset,
  /// Empty interior.
  Empty,
};

const char* to_string(ConeStatus s);

/// Pendular ZMP support area on the horizontal plane z = z_Z.
struct ZmpArea
{
  ConeStatus status = ConeStatus::Empty;
  /// Region of ZMP positions (x_Z, y_Z), world coordinates.
  Region2d region;
  Vec3 com = Vec3::Zero();
  /// z_Z - z_G.
  double h = 0.;
  /// Polar rows B_ZMP acting on (x_Z - x_G, y_Z - y_G) (rows of the cone).
  Eigen::MatrixXd polar_rows;

  bool nonempty() const { return status != ConeStatus::Empty; }
};

/// Throws std::invalid_argument when the plane passes through the COM.
ZmpArea zmp_area(const WrenchCone& cone, const Vec3& com, double z_plane);

/// Feasible COM accelerations at a fixed COM position: an upward cone with
/// apex (0, 0, -g).
struct AccelCone
{
  ConeStatus status = ConeStatus::Empty;
  Vec3 apex = Vec3(0., 0., -kGravity);
  /// Rays (x~, y~, 1) from the apex, CCW.
  std::vector<Vec3> rays;
  /// Minimal halfspace form A p'' <= b.
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  /// Cross-section at z'' = 0 in (x~, y~) = (x'', y'') / (g + z'').
  Region2d section;

  bool nonempty() const { return status != ConeStatus::Empty; }
  bool contains(const Vec3& accel, double tol = 1e-9) const;
};

AccelCone accel_cone(const WrenchCone& cone, const Vec3& com);

struct BretlLallOptions
{
  /// Terminate once the outer minus inner area drops below this (m^2).
  double area_tol = 1e-6;
  /// Support values within this of an inner edge mark the edge as exact (m).
  double edge_tol = 1e-9;
  int max_queries = 500;
};

struct BretlLallResult
{
  Region2d region;
  int lp_queries = 0;
  double area_gap = 0.;
};

/// Static-equilibrium polygon by iterative projection of the force-existence
/// LP: support queries along the outward normals of the inner approximation.
BretlLallResult bretl_lall_polygon(const ContactSet& cs, double mass = 1.,
                                   const BretlLallOptions& options = {});

}  // namespace cwc
