#include "srploc/srp_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace srploc::srp_grid {

using geometry::Vec3;

std::size_t SphericalGrid::flat_index(std::size_t elevation_idx, std::size_t azimuth_idx) const {
  if (elevation_idx >= elevations.size() || azimuth_idx >= azimuths.size())
    throw OutOfRange("grid angle index out of range");
  return elevation_idx * azimuths.size() + azimuth_idx;
}

std::pair<std::size_t, std::size_t> SphericalGrid::angle_indices(std::size_t flat) const {
  if (flat >= points.size()) throw OutOfRange("flat index out of range");
  return {flat / azimuths.size(), flat % azimuths.size()};
}

double SphericalGrid::azimuth_of(std::size_t flat) const {
  return azimuths[angle_indices(flat).second];
}

double SphericalGrid::elevation_of(std::size_t flat) const {
  return elevations[angle_indices(flat).first];
}

namespace {

// span/step must produce a whole number of cells.
std::size_t exact_divisions(double span, double step, const char* what) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw InvalidArgument(std::string(what) + " step must be positive");
  const double n = span / step;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n))
    throw InvalidArgument(std::string(what) + " step must divide " + std::to_string(span));
  return static_cast<std::size_t>(rounded);
}

}  // namespace

SphericalGrid build_grid(double radius, double azimuth_step_deg, double elevation_step_deg) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw InvalidArgument("grid radius must be positive");
  const std::size_t n_az = exact_divisions(360.0, azimuth_step_deg, "azimuth");
  const std::size_t n_el = exact_divisions(180.0, elevation_step_deg, "elevation");

  SphericalGrid grid;
  grid.radius = radius;
  grid.azimuths.reserve(n_az);
  for (std::size_t k = 1; k <= n_az; ++k) grid.azimuths.push_back(-180.0 + azimuth_step_deg * k);
  grid.elevations.reserve(n_el + 1);
  for (std::size_t k = 0; k <= n_el; ++k) grid.elevations.push_back(-90.0 + elevation_step_deg * k);

  grid.points.reserve(grid.azimuths.size() * grid.elevations.size());
  for (double el : grid.elevations)
    for (double az : grid.azimuths)
      grid.points.push_back(radius * geometry::direction_from_angles(az, el));
  return grid;
}

DelayTable build_delay_table(const SphericalGrid& grid, const geometry::MicArray& array,
                             const std::vector<geometry::MicPair>& pairs, double sample_rate) {
  if (!(sample_rate > 0.0)) throw InvalidArgument("sample_rate must be > 0");
  if (grid.points.empty()) throw InvalidArgument("empty grid");
  if (pairs.empty()) throw InvalidArgument("no microphone pairs");
  if (!(grid.radius > array.circumradius()))
    throw InvalidArgument("grid radius must exceed the array circumradius");

  DelayTable table;
  table.pair_count = pairs.size();
  table.point_count = grid.points.size();
  table.shifts.resize(table.pair_count * table.point_count);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    double* row = table.shifts.data() + p * table.point_count;
    for (std::size_t g = 0; g < grid.points.size(); ++g) {
      row[g] = geometry::point_delay_difference(grid.points[g], pairs[p], array) * sample_rate;
      table.max_abs_shift = std::max(table.max_abs_shift, std::abs(row[g]));
    }
  }
  return table;
}

DelayTable build_delay_table(const SphericalGrid& grid, const geometry::MicArray& array,
                             double sample_rate) {
  return build_delay_table(grid, array, geometry::enumerate_pairs(array), sample_rate);
}

SrpMap make_srp_map(const SphericalGrid& grid) {
  SrpMap map;
  map.power.assign(grid.size(), 0.0);
  return map;
}

void accumulate_srp(const std::vector<spectral::CorrelationFunction>& correlations,
                    const DelayTable& table, SrpMap& map) {
  if (correlations.size() != table.pair_count)
    throw InvalidArgument("need exactly one correlation per pair");
  if (map.power.size() != table.point_count)
    throw InvalidArgument("SRP map size does not match the delay table");
  for (const auto& corr : correlations) {
    // Interpolation touches floor(shift) and floor(shift)+1.
    if (table.max_abs_shift > static_cast<double>(corr.max_lag()) - 1.0)
      throw InvalidArgument("correlation lag range does not cover the delay table");
  }

  for (std::size_t p = 0; p < table.pair_count; ++p) {
    const auto& corr = correlations[p];
    const int lmax = corr.max_lag();
    const double* shifts = table.shifts.data() + p * table.point_count;
    for (std::size_t g = 0; g < table.point_count; ++g) {
      const double shift = shifts[g];
      const double floor_shift = std::floor(shift);
      const int i0 = static_cast<int>(floor_shift) + lmax;
      const double frac = shift - floor_shift;
      const double v0 = corr.values[static_cast<std::size_t>(i0)];
      const double v1 = corr.values[static_cast<std::size_t>(i0 + 1)];
      map.power[g] += v0 + frac * (v1 - v0);
    }
  }
  ++map.frames_accumulated;
}

double angular_distance(const DoaEstimate& a, const DoaEstimate& b) {
  const Vec3 ua = geometry::direction_from_angles(a.azimuth, a.elevation);
  const Vec3 ub = geometry::direction_from_angles(b.azimuth, b.elevation);
  return geometry::rad_to_deg(std::acos(std::clamp(geometry::dot(ua, ub), -1.0, 1.0)));
}

std::vector<DoaEstimate> find_peaks(const SrpMap& map, const SphericalGrid& grid,
                                    int max_sources, double suppression_radius_deg) {
  if (max_sources < 1) throw InvalidArgument("max_sources must be >= 1");
  if (!(suppression_radius_deg > 0.0)) throw InvalidArgument("suppression_radius must be > 0");
  if (map.power.size() != grid.size()) throw InvalidArgument("SRP map size does not match grid");

  const double cos_radius = std::cos(geometry::deg_to_rad(std::min(suppression_radius_deg, 180.0)));
  const double inv_r2 = 1.0 / (grid.radius * grid.radius);

  std::vector<char> suppressed(grid.size(), 0);
  std::vector<DoaEstimate> peaks;
  peaks.reserve(static_cast<std::size_t>(max_sources));

  for (int s = 0; s < max_sources; ++s) {
    std::size_t best = grid.size();
    double best_power = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!suppressed[g] && map.power[g] > best_power) {
        best_power = map.power[g];
        best = g;
      }
    }
    if (best == grid.size()) break;  // everything suppressed
    // Zero or negative accumulated GCC is background, not a source, and
    // exact ties only arise from structurally identical points; both stops
    // keep the output strictly descending.
    if (best_power <= 0.0 && !peaks.empty()) break;
    if (!peaks.empty() && best_power >= peaks.back().power) break;

    peaks.push_back({grid.azimuth_of(best), grid.elevation_of(best), best_power});

    const Vec3 u = grid.points[best];
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!suppressed[g] && geometry::dot(u, grid.points[g]) * inv_r2 >= cos_radius)
        suppressed[g] = 1;
    }
  }
  return peaks;
}

void write_srp_csv(std::ostream& out, const SrpMap& map, const SphericalGrid& grid) {
  if (map.power.size() != grid.size()) throw InvalidArgument("SRP map size does not match grid");
  out << "elevation_deg,azimuth_deg,power\n";
  for (std::size_t g = 0; g < grid.size(); ++g)
    out << grid.elevation_of(g) << ',' << grid.azimuth_of(g) << ',' << map.power[g] << '\n';
}

}  // namespace srploc::srp_grid
