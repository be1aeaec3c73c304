#include "cwc/contact.hpp"

#include <cmath>
#include <stdexcept>

#include "cwc/double_description.hpp"

namespace cwc {

ContactSet rectangle_contacts(const Vec3& center, const Mat3& rotation, double length, double width,
                              double mu, int edges)
{
  ContactSet cs;
  const Vec3 n = rotation.col(2);
  for (const double sx : {1., -1.}) {
    for (const double sy : {1., -1.}) {
      const Vec3 local(0.5 * sx * length, 0.5 * sy * width, 0.);
      cs.contacts.push_back({center + rotation * local, n, mu, edges});
    }
  }
  return cs;
}

ContactSet merge(const ContactSet& a, const ContactSet& b)
{
  ContactSet out = a;
  out.contacts.insert(out.contacts.end(), b.contacts.begin(), b.contacts.end());
  return out;
}

std::pair<Vec3, Vec3> tangent_frame(const Vec3& n)
{
  const Vec3 ref = std::abs(n.x()) > 0.99 ? Vec3::UnitY() : Vec3::UnitX();
  const Vec3 t1 = (ref - ref.dot(n) * n).normalized();
  return {t1, n.cross(t1)};
}

FrictionPyramid linearize_friction(const Contact& c)
{
  if (std::abs(c.normal.norm() - 1.) > 1e-12) {
    throw std::invalid_argument("linearize_friction: contact normal is not unit");
  }
  if (!(c.mu > 0.)) throw std::invalid_argument("linearize_friction: friction must be positive");
  if (c.edges < 3) throw std::invalid_argument("linearize_friction: need at least 3 edges");

  const auto [t1, t2] = tangent_frame(c.normal);
  FrictionPyramid p;
  for (int e = 0; e < c.edges; ++e) {
    const double th = M_PI / c.edges + 2. * M_PI * e / c.edges;
    p.rays.push_back(c.normal + c.mu * (std::cos(th) * t1 + std::sin(th) * t2));
  }
  p.halfspaces.resize(c.edges, 3);
  for (int e = 0; e < c.edges; ++e) {
    Vec3 row = p.rays[(e + 1) % c.edges].cross(p.rays[e]).normalized();
    if (row.dot(c.normal) > 0.) row = -row;
    p.halfspaces.row(e) = row.transpose();
  }
  return p;
}

Eigen::MatrixXd grasp_matrix(const ContactSet& cs, const Vec3& origin)
{
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(6, 3 * cs.size());
  for (int i = 0; i < cs.size(); ++i) {
    G.block<3, 3>(0, 3 * i).setIdentity();
    G.block<3, 3>(3, 3 * i) = skew(cs.contacts[i].position - origin);
  }
  return G;
}

Eigen::MatrixXd WrenchCone::matrix() const
{
  Eigen::MatrixXd A(size(), 6);
  for (int i = 0; i < size(); ++i) A.row(i) = rows[i].row().transpose();
  return A;
}

Eigen::MatrixXd WrenchCone::force_part() const { return matrix().leftCols(3); }

Eigen::MatrixXd WrenchCone::torque_part() const { return matrix().rightCols(3); }

WrenchCone compute_cwc(const ContactSet& cs, const Vec3& origin)
{
  if (cs.empty()) throw std::invalid_argument("compute_cwc: empty contact set");
  std::vector<Vec6> gens;
  for (const auto& c : cs.contacts) {
    const Vec3 arm = c.position - origin;
    for (const auto& f : linearize_friction(c).rays) {
      Vec6 g;
      g << f, arm.cross(f);
      gens.push_back(g);
    }
  }
  Eigen::MatrixXd R(gens.size(), 6);
  for (size_t k = 0; k < gens.size(); ++k) R.row(k) = gens[k].transpose();

  const DdResult dd = double_description(PolyCone::generators(R));
  WrenchCone cone;
  cone.origin = origin;
  cone.ill_conditioned = dd.ill_conditioned;
  for (Eigen::Index i = 0; i < dd.cone.rows.rows(); ++i) {
    cone.rows.push_back(DualTwist::from_row(dd.cone.rows.row(i).transpose()));
  }
  return cone;
}

ConeMembership cwc_membership(const WrenchCone& cone, const Screw& wrench, double tol)
{
  const Screw w = transport_moment(wrench, cone.origin);
  const Vec6 coords = w.coordinates();
  ConeMembership out;
  out.slack.resize(cone.size());
  for (int i = 0; i < cone.size(); ++i) out.slack(i) = cone.rows[i].row().dot(coords);
  const double bound = tol * std::max(1., coords.norm());
  out.member = cone.size() == 0 || out.slack.maxCoeff() <= bound;
  return out;
}

}  // namespace cwc
