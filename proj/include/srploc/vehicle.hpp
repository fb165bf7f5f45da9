#pragma once

#include <array>
#include <ostream>
#include <vector>

namespace srploc::vehicle {

/// Three omni wheels, mounting angles in degrees counterclockwise from the
/// body +x (forward) axis. body_radius is the center-to-wheel distance.
struct DriveGeometry {
  std::array<double, 3> wheel_angles_deg = {90.0, 210.0, 330.0};
  double wheel_radius = 0.03;  // meters; motor-side conversion only
  double body_radius = 0.2;    // meters
};

/// Body-frame velocity command: forward, left, counterclockwise yaw.
struct BodyTwist {
  double vx = 0.0;     // m/s
  double vy = 0.0;     // m/s
  double omega = 0.0;  // rad/s
};

/// Tangential wheel surface speeds, m/s.
struct WheelSpeeds {
  std::array<double, 3> speeds = {0.0, 0.0, 0.0};
};

/// Planar pose; heading in radians, normalized to (-pi, pi].
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

void validate(const DriveGeometry& geom);

/// wheel_i = -sin(theta_i) vx + cos(theta_i) vy + body_radius * omega.
WheelSpeeds inverse_kinematics(const BodyTwist& twist, const DriveGeometry& geom);

/// Unique twist reproducing the wheel speeds (3x3 solve); throws
/// SingularGeometry when the wheel arrangement is degenerate.
BodyTwist forward_kinematics(const WheelSpeeds& wheels, const DriveGeometry& geom);

struct ControllerParams {
  double gain = 2.0;           // 1/s
  double max_omega = 1.5;      // rad/s
  double forward_speed = 0.3;  // m/s
  double deadband = 0.0872664625997164770;  // rad (5 degrees)
};

/// Proportional steering toward the measured source azimuth: omega is the
/// clamped P term, forward motion engages only once the error is inside the
/// deadband, vy stays 0.
BodyTwist heading_controller(double azimuth_error_rad, double gain, double max_omega,
                             double forward_speed, double deadband_rad);
BodyTwist heading_controller(double azimuth_error_rad, const ControllerParams& params);

/// Euler step of the body twist in the world frame; heading renormalized.
VehicleState step(const VehicleState& state, const BodyTwist& twist, double dt);

/// One control-cycle record of the closed loop.
struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;        // radians
  double azimuth_error = 0.0;  // radians, measurement driving this cycle
  std::array<double, 3> wheels = {0.0, 0.0, 0.0};
};

/// CSV export: header t,x,y,heading,azimuth_error,wheel0,wheel1,wheel2.
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectorySample>& log);

}  // namespace srploc::vehicle
