#include "srploc/vehicle.hpp"

#include <algorithm>
#include <cmath>

#include "srploc/errors.hpp"
#include "srploc/geometry.hpp"

namespace srploc::vehicle {

void validate(const DriveGeometry& geom) {
  if (!(geom.wheel_radius > 0.0) || !(geom.body_radius > 0.0))
    throw InvalidArgument("wheel_radius and body_radius must be > 0");
  for (double angle : geom.wheel_angles_deg)
    if (!std::isfinite(angle)) throw InvalidArgument("wheel angles must be finite");
}

WheelSpeeds inverse_kinematics(const BodyTwist& twist, const DriveGeometry& geom) {
  validate(geom);
  WheelSpeeds wheels;
  for (int i = 0; i < 3; ++i) {
    const double theta = geometry::deg_to_rad(geom.wheel_angles_deg[i]);
    wheels.speeds[i] =
        -std::sin(theta) * twist.vx + std::cos(theta) * twist.vy + geom.body_radius * twist.omega;
  }
  return wheels;
}

BodyTwist forward_kinematics(const WheelSpeeds& wheels, const DriveGeometry& geom) {
  validate(geom);
  // Rows of the kinematic matrix: [-sin(theta_i), cos(theta_i), R].
  double m[3][3];
  for (int i = 0; i < 3; ++i) {
    const double theta = geometry::deg_to_rad(geom.wheel_angles_deg[i]);
    m[i][0] = -std::sin(theta);
    m[i][1] = std::cos(theta);
    m[i][2] = geom.body_radius;
  }
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  // Distinct wheel headings always give an invertible matrix; det ~ 0 means
  // coincident (mod 360) wheel angles.
  if (std::abs(det) < 1e-9 * geom.body_radius)
    throw SingularGeometry("wheel arrangement is kinematically singular");

  const auto& w = wheels.speeds;
  BodyTwist twist;
  twist.vx = (w[0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
              m[0][1] * (w[1] * m[2][2] - m[1][2] * w[2]) +
              m[0][2] * (w[1] * m[2][1] - m[1][1] * w[2])) /
             det;
  twist.vy = (m[0][0] * (w[1] * m[2][2] - m[1][2] * w[2]) -
              w[0] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
              m[0][2] * (m[1][0] * w[2] - w[1] * m[2][0])) /
             det;
  twist.omega = (m[0][0] * (m[1][1] * w[2] - w[1] * m[2][1]) -
                 m[0][1] * (m[1][0] * w[2] - w[1] * m[2][0]) +
                 w[0] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])) /
                det;
  return twist;
}

BodyTwist heading_controller(double azimuth_error_rad, double gain, double max_omega,
                             double forward_speed, double deadband_rad) {
  if (gain < 0.0 || max_omega < 0.0 || forward_speed < 0.0)
    throw InvalidArgument("controller gains and limits must be >= 0");
  BodyTwist twist;
  twist.omega = std::clamp(gain * azimuth_error_rad, -max_omega, max_omega);
  twist.vx = std::abs(azimuth_error_rad) < deadband_rad ? forward_speed : 0.0;
  twist.vy = 0.0;
  return twist;
}

BodyTwist heading_controller(double azimuth_error_rad, const ControllerParams& params) {
  return heading_controller(azimuth_error_rad, params.gain, params.max_omega,
                            params.forward_speed, params.deadband);
}

VehicleState step(const VehicleState& state, const BodyTwist& twist, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  const double c = std::cos(state.heading);
  const double s = std::sin(state.heading);
  VehicleState next;
  next.x = state.x + dt * (twist.vx * c - twist.vy * s);
  next.y = state.y + dt * (twist.vx * s + twist.vy * c);
  next.heading = geometry::wrap_radians(state.heading + dt * twist.omega);
  return next;
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& log) {
  out << "t,x,y,heading,azimuth_error,wheel0,wheel1,wheel2\n";
  for (const auto& row : log)
    out << row.t << ',' << row.x << ',' << row.y << ',' << row.heading << ','
        << row.azimuth_error << ',' << row.wheels[0] << ',' << row.wheels[1] << ','
        << row.wheels[2] << '\n';
}

}  // namespace srploc::vehicle
