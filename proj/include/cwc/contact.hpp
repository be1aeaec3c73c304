#pragma once

#include <vector>

#include <Eigen/Core>

#include "cwc/geometry.hpp"

namespace cwc {

/// Point contact with Coulomb friction, linearized to a pyramid of `edges` rays.
struct Contact
{
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double mu = 0.7;
  int edges = 4;
};

/// Simultaneous contacts; surface contacts appear as their corner points.
struct ContactSet
{
  std::vector<Contact> contacts;

  int size() const { return static_cast<int>(contacts.size()); }
  bool empty() const { return contacts.empty(); }
};

/// Corners of a rectangular foot as contacts. `rotation` maps the foot frame
/// (x along the length, z along the sole normal) to the world.
ContactSet rectangle_contacts(const Vec3& center, const Mat3& rotation, double length, double width,
                              double mu, int edges = 4);

/// Merges contact sets (double support).
ContactSet merge(const ContactSet& a, const ContactSet& b);

/// Inner pyramid approximation of a friction cone.
struct FrictionPyramid
{
  /// Unit-normal-component rays n + mu (cos t, sin t) on the cone boundary.
  std::vector<Vec3> rays;
  /// Rows F with F f <= 0 iff f is in the pyramid.
  Eigen::MatrixXd halfspaces;
};

/// Orthonormal tangents (t1, t2) with t1 x t2 = n, chosen deterministically.
std::pair<Vec3, Vec3> tangent_frame(const Vec3& n);

/// Throws std::invalid_argument on a non-unit normal, mu <= 0 or edges < 3.
FrictionPyramid linearize_friction(const Contact& c);

/// 6 x 3K map from stacked contact forces to the net wrench (f, tau_O) at
/// `origin`; block i is [I; (C_i - O) x].
Eigen::MatrixXd grasp_matrix(const ContactSet& cs, const Vec3& origin = Vec3::Zero());

/// Halfspace form A_O w_O <= 0 of the contact wrench cone; each row is a dual
/// twist acting on wrenches expressed at `origin`.
struct WrenchCone
{
  std::vector<DualTwist> rows;
  Vec3 origin = Vec3::Zero();
  bool ill_conditioned = false;

  int size() const { return static_cast<int>(rows.size()); }
  /// L x 6 matrix [a_O a] of all rows.
  Eigen::MatrixXd matrix() const;
  /// Force part A'_O (first three columns).
  Eigen::MatrixXd force_part() const;
  /// Torque part (last three columns).
  Eigen::MatrixXd torque_part() const;
};

/// V-rep rays (f_e, (C_i - O) x f_e) over all contacts and pyramid edges,
/// converted to a minimal H-rep. Throws std::invalid_argument on an empty set.
WrenchCone compute_cwc(const ContactSet& cs, const Vec3& origin = Vec3::Zero());

struct ConeMembership
{
  bool member = false;
  /// Per-row value a . w; nonpositive rows hold.
  Eigen::VectorXd slack;
};

/// Tests a wrench expressed at any point (transported to the cone origin).
ConeMembership cwc_membership(const WrenchCone& cone, const Screw& wrench, double tol = 1e-9);

}  // namespace cwc
