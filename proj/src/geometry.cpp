#include "srploc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

namespace srploc::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinMicSpacing = 1e-6;  // meters

bool finite(const Vec3& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

double deg_to_rad(double degrees) { return degrees * kPi / 180.0; }
double rad_to_deg(double radians) { return radians * 180.0 / kPi; }

double wrap_degrees(double degrees) {
  if (degrees > -180.0 && degrees <= 180.0) return degrees;
  double r = std::fmod(degrees + 180.0, 360.0);
  if (r <= 0.0) r += 360.0;
  return r - 180.0;
}

double wrap_radians(double radians) {
  if (radians > -kPi && radians <= kPi) return radians;
  double r = std::fmod(radians + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

Vec3 direction_from_angles(double azimuth_deg, double elevation_deg) {
  const double az = deg_to_rad(azimuth_deg);
  const double el = deg_to_rad(elevation_deg);
  return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

void angles_from_direction(const Vec3& u, double& azimuth_deg, double& elevation_deg) {
  const double r = norm(u);
  if (r <= 0.0 || !std::isfinite(r)) throw InvalidArgument("direction vector must be finite and nonzero");
  azimuth_deg = wrap_degrees(rad_to_deg(std::atan2(u.y, u.x)));
  elevation_deg = rad_to_deg(std::asin(std::clamp(u.z / r, -1.0, 1.0)));
}

Vec3 MicArray::centroid() const {
  Vec3 c;
  for (const auto& m : mics) c = c + m;
  return (1.0 / static_cast<double>(mics.size())) * c;
}

double MicArray::circumradius() const {
  double r = 0.0;
  for (const auto& m : mics) r = std::max(r, norm(m));
  return r;
}

MicArray make_mic_array(std::vector<Vec3> mics, double speed_of_sound) {
  if (mics.size() < 2) throw InvalidArgument("mic array needs at least 2 microphones");
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound))
    throw InvalidArgument("speed_of_sound must be positive and finite");
  for (const auto& m : mics)
    if (!finite(m)) throw InvalidArgument("microphone positions must be finite");
  for (std::size_t i = 0; i < mics.size(); ++i)
    for (std::size_t j = i + 1; j < mics.size(); ++j)
      if (norm(mics[i] - mics[j]) <= kMinMicSpacing)
        throw InvalidArgument("microphones " + std::to_string(i) + " and " + std::to_string(j) +
                              " are coincident");
  return MicArray{std::move(mics), speed_of_sound};
}

MicArray cubical_array(double edge_length, double speed_of_sound) {
  if (!(edge_length > 0.0) || !std::isfinite(edge_length))
    throw InvalidArgument("edge_length must be positive and finite");
  const double h = edge_length / 2.0;
  std::vector<Vec3> mics;
  mics.reserve(8);
  for (double z : {-h, h})
    for (double y : {-h, h})
      for (double x : {-h, h}) mics.push_back({x, y, z});
  return make_mic_array(std::move(mics), speed_of_sound);
}

MicArray mic_array_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("array: invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("mics"))
    throw ConfigError("array.mics: missing");
  std::vector<Vec3> mics;
  for (const auto& m : doc.at("mics")) {
    if (!m.is_array() || m.size() != 3) throw ConfigError("array.mics: each entry must be [x, y, z]");
    mics.push_back({m[0].get<double>(), m[1].get<double>(), m[2].get<double>()});
  }
  const double c = doc.value("speed_of_sound", kDefaultSpeedOfSound);
  try {
    return make_mic_array(std::move(mics), c);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("array: ") + e.what());
  }
}

MicPair make_pair(int index_a, int index_b, const MicArray& array) {
  const int n = static_cast<int>(array.mics.size());
  if (index_a < 0 || index_a >= n || index_b < 0 || index_b >= n)
    throw InvalidArgument("mic index out of range");
  if (index_a == index_b) throw InvalidArgument("pair needs two distinct microphones");
  return MicPair{index_a, index_b, norm(array.mics[index_a] - array.mics[index_b])};
}

std::vector<MicPair> enumerate_pairs(const MicArray& array) {
  const int n = static_cast<int>(array.mics.size());
  std::vector<MicPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.push_back(make_pair(a, b, array));
  return pairs;
}

double farfield_tdoa(double distance, double angle, double speed_of_sound) {
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound))
    throw InvalidArgument("speed_of_sound must be positive");
  if (!(distance >= 0.0) || !std::isfinite(distance))
    throw InvalidArgument("distance must be non-negative");
  return distance * std::sin(angle) / speed_of_sound;
}

double point_delay_difference(const Vec3& point, const MicPair& pair, const MicArray& array) {
  if (!finite(point)) throw InvalidArgument("point must be finite");
  const Vec3& pa = array.mics.at(pair.index_a);
  const Vec3& pb = array.mics.at(pair.index_b);
  const double da = norm(point - pa);
  const double db = norm(point - pb);
  if (da <= kMinMicSpacing || db <= kMinMicSpacing)
    throw InvalidArgument("point coincides with a microphone");
  return (da - db) / array.speed_of_sound;
}

}  // namespace srploc::geometry
