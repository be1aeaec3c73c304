#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cwc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kGravity = 9.81;

/// World gravity vector (0, 0, -g).
inline Vec3 gravity_vector() { return Vec3(0., 0., -kGravity); }

/// Skew-symmetric matrix such that skew(a) * b == a.cross(b).
inline Mat3 skew(const Vec3& a)
{
  Mat3 m;
  // clang-format off
  m <<     0., -a.z(),  a.y(),
        a.z(),     0., -a.x(),
       -a.y(),  a.x(),     0.;
  // clang-format on
  return m;
}

/// A screw: resultant vector plus moment taken at an explicit reference point.
///
/// For wrenches the resultant is the force and the moment the torque; for
/// twists the resultant is the angular velocity and the moment the linear
/// velocity of the reference point.
struct Screw
{
  Vec3 resultant = Vec3::Zero();
  Vec3 moment = Vec3::Zero();
  Vec3 ref_point = Vec3::Zero();

  static Screw wrench(const Vec3& force, const Vec3& torque, const Vec3& at = Vec3::Zero())
  {
    return {force, torque, at};
  }

  static Screw twist(const Vec3& angular, const Vec3& linear, const Vec3& at = Vec3::Zero())
  {
    return {angular, linear, at};
  }

  /// Stacked coordinates (resultant, moment), the layout used by wrench cones.
  Vec6 coordinates() const
  {
    Vec6 c;
    c << resultant, moment;
    return c;
  }
};

/// Varignon transport: m_P = m_O + (O - P) x r.
Screw transport_moment(const Screw& s, const Vec3& p);

/// Instantaneous power between a twist and a wrench, v.f + w.tau, evaluated at
/// the twist's reference point (the wrench is transported there first).
double screw_pairing(const Screw& twist, const Screw& wrench);

/// One row of a contact wrench cone read as a twist. `a_o` pairs with the
/// force and is expressed at the world origin; `a` pairs with the torque.
struct DualTwist
{
  Vec3 a_o = Vec3::Zero();
  Vec3 a = Vec3::Zero();

  /// Row coefficients [a_o; a] acting on (f, tau_O).
  Vec6 row() const
  {
    Vec6 r;
    r << a_o, a;
    return r;
  }

  static DualTwist from_row(const Vec6& r) { return {r.head<3>(), r.tail<3>()}; }
};

/// Force-pairing coefficient of the dual twist re-expressed at p_G:
/// a_G = a_O + (O - G) x a = a_O + a x p_G.
Vec3 dual_twist_at(const DualTwist& d, const Vec3& p_g);

/// d . w with the wrench expressed at any point.
double dual_pairing(const DualTwist& d, const Screw& wrench);

}  // namespace cwc
