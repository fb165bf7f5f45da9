#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "srploc/geometry.hpp"

using namespace srploc;
using namespace srploc::geometry;

namespace {

// Rodrigues rotation about a unit axis, test-side helper.
Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Vec3 cross{axis.y * v.z - axis.z * v.y, axis.z * v.x - axis.x * v.z,
                   axis.x * v.y - axis.y * v.x};
  const double ad = dot(axis, v);
  return {v.x * c + cross.x * s + axis.x * ad * (1 - c),
          v.y * c + cross.y * s + axis.y * ad * (1 - c),
          v.z * c + cross.z * s + axis.z * ad * (1 - c)};
}

Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
  return (1.0 / norm(v)) * v;
}

}  // namespace

TEST_CASE("cubical array preset") {
  const MicArray array = cubical_array(0.15);
  REQUIRE(array.mics.size() == 8);
  for (const auto& m : array.mics) {
    CHECK(std::abs(m.x) == doctest::Approx(0.075).epsilon(1e-12));
    CHECK(std::abs(m.y) == doctest::Approx(0.075).epsilon(1e-12));
    CHECK(std::abs(m.z) == doctest::Approx(0.075).epsilon(1e-12));
  }
  CHECK(norm(array.centroid()) <= 1e-9);
  CHECK(array.speed_of_sound == 343.0);

  // deterministic ordering: sorted by z, then y, then x
  for (std::size_t i = 1; i < 8; ++i) {
    const auto& a = array.mics[i - 1];
    const auto& b = array.mics[i];
    const bool ordered = a.z < b.z || (a.z == b.z && (a.y < b.y || (a.y == b.y && a.x < b.x)));
    CHECK(ordered);
  }
}

TEST_CASE("cubical array pair distances") {
  const MicArray array = cubical_array(0.15);
  const auto pairs = enumerate_pairs(array);
  REQUIRE(pairs.size() == 28);
  double min_d = 1e9, max_d = 0.0;
  for (const auto& p : pairs) {
    min_d = std::min(min_d, p.distance);
    max_d = std::max(max_d, p.distance);
  }
  CHECK(min_d == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(max_d == doctest::Approx(0.15 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("cubical array scales linearly") {
  const MicArray small = cubical_array(0.15);
  const MicArray big = cubical_array(2.0);
  const double factor = 2.0 / 0.15;
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(big.mics[i].x == doctest::Approx(small.mics[i].x * factor).epsilon(1e-12));
    CHECK(big.mics[i].y == doctest::Approx(small.mics[i].y * factor).epsilon(1e-12));
    CHECK(big.mics[i].z == doctest::Approx(small.mics[i].z * factor).epsilon(1e-12));
  }
}

TEST_CASE("cubical array rejects bad edges") {
  CHECK_THROWS_AS(cubical_array(0.0), InvalidArgument);
  CHECK_THROWS_AS(cubical_array(-1.0), InvalidArgument);
  CHECK_THROWS_AS(cubical_array(std::nan("")), InvalidArgument);
  CHECK_THROWS_AS(cubical_array(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST_CASE("make_mic_array invariants") {
  CHECK_THROWS_AS(make_mic_array({{0, 0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(make_mic_array({{0, 0, 0}, {0, 0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(make_mic_array({{0, 0, 0}, {0, 0, 1e-8}}), InvalidArgument);
  CHECK_THROWS_AS(make_mic_array({{0, 0, 0}, {std::nan(""), 0, 0}}), InvalidArgument);
  CHECK_THROWS_AS(make_mic_array({{0, 0, 0}, {1, 0, 0}}, -1.0), InvalidArgument);
  CHECK_NOTHROW(make_mic_array({{0, 0, 0}, {1, 0, 0}}));
}

TEST_CASE("enumerate_pairs ordering and count") {
  const MicArray two = make_mic_array({{0, 0, 0}, {0.2, 0, 0}});
  CHECK(enumerate_pairs(two).size() == 1);

  const MicArray array = cubical_array(0.15);
  const auto pairs = enumerate_pairs(array);
  int k = 0;
  for (int a = 0; a < 8; ++a) {
    for (int b = a + 1; b < 8; ++b, ++k) {
      CHECK(pairs[k].index_a == a);
      CHECK(pairs[k].index_b == b);
      CHECK(pairs[k].distance ==
            doctest::Approx(norm(array.mics[a] - array.mics[b])).epsilon(1e-15));
    }
  }
  // opposite cube corners
  CHECK(pairs[6].index_a == 0);
  CHECK(pairs[6].index_b == 7);
  CHECK(pairs[6].distance == doctest::Approx(0.2598076211).epsilon(1e-9));
}

TEST_CASE("farfield_tdoa") {
  CHECK(farfield_tdoa(0.15, 0.0, 343.0) == 0.0);
  CHECK(farfield_tdoa(0.15, std::numbers::pi / 2, 343.0) ==
        doctest::Approx(4.3732e-4).epsilon(1e-4));
  CHECK(farfield_tdoa(0.15, std::numbers::pi / 6, 343.0) ==
        doctest::Approx(2.1866e-4).epsilon(1e-4));
  CHECK_THROWS_AS(farfield_tdoa(0.15, 0.1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(farfield_tdoa(0.15, 0.1, -343.0), InvalidArgument);
  CHECK_THROWS_AS(farfield_tdoa(-0.1, 0.1, 343.0), InvalidArgument);
}

TEST_CASE("point_delay_difference basics") {
  const MicArray array = make_mic_array({{0.075, 0, 0}, {-0.075, 0, 0}});
  const auto pair = make_pair(0, 1, array);

  // point equidistant from both mics
  CHECK(point_delay_difference({0, 3.0, 0}, pair, array) == 0.0);

  // collinear far point: exact -0.15/343
  CHECK(point_delay_difference({10, 0, 0}, pair, array) ==
        doctest::Approx(-0.15 / 343.0).epsilon(1e-12));

  // antisymmetry under swapping the pair
  const auto swapped = make_pair(1, 0, array);
  const Vec3 p{1.3, -0.4, 2.2};
  CHECK(point_delay_difference(p, pair, array) == -point_delay_difference(p, swapped, array));

  CHECK_THROWS_AS(point_delay_difference(array.mics[0], pair, array), InvalidArgument);
  CHECK_THROWS_AS(point_delay_difference({std::nan(""), 0, 0}, pair, array), InvalidArgument);
}

TEST_CASE("point delay bounded by pair distance over c") {
  const MicArray array = cubical_array(0.15);
  const auto pairs = enumerate_pairs(array);
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> range(0.2, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 point = range(rng) * random_unit(rng);
    for (const auto& pair : pairs) {
      const double tdoa = point_delay_difference(point, pair, array);
      CHECK(std::abs(tdoa) <= pair.distance / array.speed_of_sound + 1e-15);
    }
  }
}

TEST_CASE("point delay converges to far field") {
  const MicArray array = cubical_array(0.15);
  const auto pairs = enumerate_pairs(array);
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 u = random_unit(rng);
    const Vec3 point = 100.0 * u;
    for (const auto& pair : pairs) {
      const Vec3 baseline = array.mics[pair.index_b] - array.mics[pair.index_a];
      const double farfield = dot(u, baseline) / array.speed_of_sound;
      CHECK(std::abs(point_delay_difference(point, pair, array) - farfield) <= 1e-6);
    }
  }
}

TEST_CASE("point delay invariant under joint rotation") {
  const MicArray array = cubical_array(0.15);
  const auto pairs = enumerate_pairs(array);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 axis = random_unit(rng);
    const double theta = angle(rng);
    const Vec3 point = 2.0 * random_unit(rng);

    std::vector<Vec3> rotated;
    for (const auto& m : array.mics) rotated.push_back(rotate(m, axis, theta));
    const MicArray rotated_array = make_mic_array(rotated, array.speed_of_sound);
    const Vec3 rotated_point = rotate(point, axis, theta);

    for (const auto& pair : pairs) {
      const auto rpair = make_pair(pair.index_a, pair.index_b, rotated_array);
      CHECK(std::abs(point_delay_difference(point, pair, array) -
                     point_delay_difference(rotated_point, rpair, rotated_array)) <= 1e-12);
    }
  }
}

TEST_CASE("mic array json round trip") {
  const MicArray array = mic_array_from_json(
      R"({"speed_of_sound": 340.0, "mics": [[0.1, 0, 0], [-0.1, 0, 0], [0, 0.1, 0]]})");
  CHECK(array.speed_of_sound == 340.0);
  REQUIRE(array.mics.size() == 3);
  CHECK(array.mics[1].x == -0.1);

  // default speed of sound
  CHECK(mic_array_from_json(R"({"mics": [[0,0,0],[1,0,0]]})").speed_of_sound == 343.0);

  CHECK_THROWS_AS(mic_array_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(mic_array_from_json(R"({"speed_of_sound": 343})"), ConfigError);
  CHECK_THROWS_AS(mic_array_from_json(R"({"mics": [[0,0],[1,0]]})"), ConfigError);
  CHECK_THROWS_AS(mic_array_from_json(R"({"mics": [[0,0,0],[0,0,0]]})"), ConfigError);
}

TEST_CASE("angle helpers") {
  CHECK(wrap_degrees(180.0) == 180.0);
  CHECK(wrap_degrees(-180.0) == 180.0);
  CHECK(wrap_degrees(540.0) == doctest::Approx(180.0));
  CHECK(wrap_degrees(-190.0) == doctest::Approx(170.0));
  CHECK(wrap_degrees(10.0) == 10.0);

  double az = 0.0, el = 0.0;
  angles_from_direction(direction_from_angles(37.0, -12.0), az, el);
  CHECK(az == doctest::Approx(37.0).epsilon(1e-9));
  CHECK(el == doctest::Approx(-12.0).epsilon(1e-9));

  angles_from_direction({0, 0, 1}, az, el);
  CHECK(el == doctest::Approx(90.0));
  CHECK_THROWS_AS(angles_from_direction({0, 0, 0}, az, el), InvalidArgument);
}
