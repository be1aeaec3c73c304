#pragma once

#include <random>

#include <Eigen/Geometry>

#include "cwc/contact.hpp"

namespace fixtures {

inline Eigen::Matrix3d rpy(double roll, double pitch, double yaw)
{
  return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
          Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
          Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
      .toRotationMatrix();
}

/// Flat rectangular foot centered at (x, y, z).
inline cwc::ContactSet flat_foot(double x, double y, double z = 0., double length = 0.2,
                                 double width = 0.1, double mu = 0.7)
{
  return cwc::rectangle_contacts({x, y, z}, Eigen::Matrix3d::Identity(), length, width, mu);
}

/// 1 to 3 rectangular contacts with tilts up to max_tilt, spread over a
/// walking-scale area.
inline cwc::ContactSet random_stance(std::mt19937& rng, int n_contacts, double max_tilt = 0.5,
                                     double mu = 0.7)
{
  std::uniform_real_distribution<double> pos(-0.4, 0.4), height(-0.1, 0.3),
      tilt(-max_tilt, max_tilt), yaw(-M_PI, M_PI), len(0.1, 0.25), wid(0.06, 0.14);
  cwc::ContactSet cs;
  for (int i = 0; i < n_contacts; ++i) {
    const Eigen::Vector3d c(pos(rng), pos(rng), height(rng));
    const auto foot =
        cwc::rectangle_contacts(c, rpy(tilt(rng), tilt(rng), yaw(rng)), len(rng), wid(rng), mu);
    cs = cwc::merge(cs, foot);
  }
  return cs;
}

}  // namespace fixtures
