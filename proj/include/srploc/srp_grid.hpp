#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "srploc/geometry.hpp"
#include "srploc/spectral.hpp"

namespace srploc::srp_grid {

/// Constant-radius direction grid. Azimuths run -180+step ... 180, elevations
/// -90 ... 90 (both inclusive of the upper end). Flattening is
/// elevation-major: flat = el_idx * |azimuths| + az_idx.
struct SphericalGrid {
  double radius = 0.0;                 // meters
  std::vector<double> azimuths;       // degrees
  std::vector<double> elevations;     // degrees
  std::vector<geometry::Vec3> points;  // one Cartesian point per flat index

  std::size_t size() const { return points.size(); }
  std::size_t flat_index(std::size_t elevation_idx, std::size_t azimuth_idx) const;
  /// Inverse of flat_index: (elevation_idx, azimuth_idx).
  std::pair<std::size_t, std::size_t> angle_indices(std::size_t flat) const;
  double azimuth_of(std::size_t flat) const;
  double elevation_of(std::size_t flat) const;
};

/// Steps must divide 360 (azimuth) and 180 (elevation).
SphericalGrid build_grid(double radius, double azimuth_step_deg, double elevation_step_deg);

/// Per-(pair, grid point) time shifts in fractional samples:
/// shifts[p][g] = point_delay_difference(points[g], pair p) * sample_rate.
struct DelayTable {
  std::size_t pair_count = 0;
  std::size_t point_count = 0;
  std::vector<double> shifts;  // row-major: pair index * point_count + flat index
  double max_abs_shift = 0.0;

  double at(std::size_t pair, std::size_t point) const {
    return shifts[pair * point_count + point];
  }
};

DelayTable build_delay_table(const SphericalGrid& grid, const geometry::MicArray& array,
                             const std::vector<geometry::MicPair>& pairs, double sample_rate);
DelayTable build_delay_table(const SphericalGrid& grid, const geometry::MicArray& array,
                             double sample_rate);

/// Running sum of GCC values over grid points, accumulated across frames.
struct SrpMap {
  std::vector<double> power;
  long frames_accumulated = 0;
};

SrpMap make_srp_map(const SphericalGrid& grid);

/// Adds sum_p interpolate_correlation(correlations[p], shifts[p][g]) into
/// power[g] for every grid point and bumps frames_accumulated. Requires one
/// correlation per pair, each covering the table's largest shift.
void accumulate_srp(const std::vector<spectral::CorrelationFunction>& correlations,
                    const DelayTable& table, SrpMap& map);

struct DoaEstimate {
  double azimuth = 0.0;    // degrees, (-180, 180]
  double elevation = 0.0;  // degrees, [-90, 90]
  double power = 0.0;
};

/// Great-circle angle between two estimated directions, degrees in [0, 180].
double angular_distance(const DoaEstimate& a, const DoaEstimate& b);

/// Greedy peak extraction: repeatedly take the global maximum, then suppress
/// every grid point within suppression_radius_deg (great-circle) of it.
/// Results descend in power; fewer than max_sources may be returned. Exact
/// ties resolve to the lowest flat index.
std::vector<DoaEstimate> find_peaks(const SrpMap& map, const SphericalGrid& grid,
                                    int max_sources, double suppression_radius_deg);

/// CSV export: header elevation_deg,azimuth_deg,power, one row per grid
/// point in flat-index order.
void write_srp_csv(std::ostream& out, const SrpMap& map, const SphericalGrid& grid);

}  // namespace srploc::srp_grid
