#include "cwc/geometry.hpp"

namespace cwc {

Screw transport_moment(const Screw& s, const Vec3& p)
{
  Screw out = s;
  out.moment = s.moment + (s.ref_point - p).cross(s.resultant);
  out.ref_point = p;
  return out;
}

double screw_pairing(const Screw& twist, const Screw& wrench)
{
  const Screw w = transport_moment(wrench, twist.ref_point);
  return twist.moment.dot(w.resultant) + twist.resultant.dot(w.moment);
}

Vec3 dual_twist_at(const DualTwist& d, const Vec3& p_g)
{
  return d.a_o + d.a.cross(p_g);
}

double dual_pairing(const DualTwist& d, const Screw& wrench)
{
  const Screw w = transport_moment(wrench, Vec3::Zero());
  return d.a_o.dot(w.resultant) + d.a.dot(w.moment);
}

}  // namespace cwc
