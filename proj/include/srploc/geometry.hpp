#pragma once

#include <string>
#include <vector>

#include "srploc/errors.hpp"

namespace srploc::geometry {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);

double deg_to_rad(double degrees);
double rad_to_deg(double radians);

/// Wraps an angle in degrees to (-180, 180].
double wrap_degrees(double degrees);

/// Wraps an angle in radians to (-pi, pi].
double wrap_radians(double radians);

/// Unit vector for the frame used throughout: x forward, y left, z up.
/// Azimuth is measured in the x-y plane from +x toward +y, elevation from
/// the x-y plane toward +z.
Vec3 direction_from_angles(double azimuth_deg, double elevation_deg);

/// Inverse of direction_from_angles; azimuth in (-180, 180], elevation in
/// [-90, 90]. At the poles the azimuth is degenerate and comes out as what
/// atan2 reports for the (tiny) x-y residual.
void angles_from_direction(const Vec3& u, double& azimuth_deg, double& elevation_deg);

constexpr double kDefaultSpeedOfSound = 343.0;  // m/s, air at ~20 C

/// Microphone positions in meters, array-centered frame, plus the speed of
/// sound used for all delay computations. Immutable after construction.
struct MicArray {
  std::vector<Vec3> mics;
  double speed_of_sound = kDefaultSpeedOfSound;

  Vec3 centroid() const;
  /// Largest distance of any microphone from the origin.
  double circumradius() const;
};

/// Validates and returns a MicArray: at least 2 mics, finite positions,
/// c > 0, pairwise distances > 1e-6 m.
MicArray make_mic_array(std::vector<Vec3> mics, double speed_of_sound = kDefaultSpeedOfSound);

/// Canonical 8-mic preset: the vertices of an axis-aligned cube of the given
/// edge, centered at the origin, ordered by z, then y, then x.
MicArray cubical_array(double edge_length, double speed_of_sound = kDefaultSpeedOfSound);

/// Parses {"speed_of_sound": <m/s>, "mics": [[x,y,z], ...]} (units meters).
MicArray mic_array_from_json(const std::string& text);

struct MicPair {
  int index_a = 0;
  int index_b = 0;
  double distance = 0.0;  // meters between the two mics
};

/// Pair with the distance filled in from the array. Indices may come in any
/// order (a == b is rejected); enumerate_pairs is what guarantees a < b.
MicPair make_pair(int index_a, int index_b, const MicArray& array);

/// All M(M-1)/2 unordered pairs, a < b, lexicographic order.
std::vector<MicPair> enumerate_pairs(const MicArray& array);

/// Far-field TDOA for two mics `distance` apart and a plane wave from
/// direction `angle` off broadside: distance * sin(angle) / c.
double farfield_tdoa(double distance, double angle, double speed_of_sound);

/// Exact per-pair delay difference for a point source:
/// (|point - pos_a| - |point - pos_b|) / c. Antisymmetric in (a, b).
double point_delay_difference(const Vec3& point, const MicPair& pair, const MicArray& array);

}  // namespace srploc::geometry
