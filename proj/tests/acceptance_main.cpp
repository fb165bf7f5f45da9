// Acceptance suite: one criterion per number, one PASS/FAIL line each.
// Run with no arguments for all criteria, or pass criterion numbers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "srploc/geometry.hpp"
#include "srploc/pipeline.hpp"
#include "srploc/scene_sim.hpp"
#include "srploc/spectral.hpp"
#include "srploc/srp_grid.hpp"
#include "srploc/vehicle.hpp"

using namespace srploc;
using scene_sim::Excitation;
using scene_sim::SceneConfig;
using scene_sim::SourceSpec;

namespace {

SceneConfig single_source(double azimuth, double elevation, double range, double snr_db,
                          std::uint64_t seed) {
  SceneConfig scene;
  scene.sources.push_back({azimuth, elevation, range, 1.0, Excitation::white_noise, {}});
  scene.noise_rms = scene_sim::noise_rms_for_snr(scene.sources[0], snr_db);
  scene.duration = 1.0;
  scene.seed = seed;
  return scene;
}

std::vector<double> white_noise(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> x(n);
  for (auto& v : x) v = gauss(rng);
  return x;
}

// Spearman rank correlation with average ranks for ties.
std::vector<double> ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> rank(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  return rank;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// --- criterion 1: five directions from the angle-accuracy table -------------

bool table_reproduction(std::ostream& out) {
  const double truths[5][2] = {{180, -90}, {45, -45}, {0, 0}, {-45, 45}, {-90, 90}};
  pipeline::LocalizerConfig config;
  const pipeline::Localizer engine(config, 16000.0);

  bool pass = true;
  for (int row = 0; row < 5; ++row) {
    const auto scene = single_source(truths[row][0], truths[row][1], 1.5, 20.0,
                                     9000 + static_cast<std::uint64_t>(row));
    const auto result = engine.run(scene_sim::synthesize(scene, config.array));
    const double error = srp_grid::angular_distance(
        result.estimates.at(0), {truths[row][0], truths[row][1], 0.0});
    const bool ok = error <= 3.0 && result.elapsed <= 10.0;
    pass = pass && ok;
    out << "    (" << truths[row][0] << ", " << truths[row][1] << ") -> ("
        << result.estimates[0].azimuth << ", " << result.estimates[0].elevation
        << "), angular error " << error << " deg, " << result.elapsed << " s"
        << (ok ? "" : "  <-- FAIL") << "\n";
  }
  return pass;
}

// --- criterion 2: three simultaneous sources --------------------------------

bool three_sources(std::ostream& out) {
  SceneConfig scene;
  scene.sources.push_back({-135.0, 35.0, 2.0, 1.0, Excitation::white_noise, {}});
  scene.sources.push_back({90.0, 75.0, 2.0, 1.0, Excitation::white_noise, {}});
  scene.sources.push_back({145.0, 60.0, 2.0, 1.0, Excitation::white_noise, {}});
  scene.noise_rms = 0.02;
  scene.duration = 1.0;
  scene.seed = 77;

  pipeline::LocalizerConfig config;
  config.max_sources = 3;
  const auto result = pipeline::localize(scene_sim::synthesize(scene, config.array), config);
  if (result.estimates.size() < 3) {
    out << "    only " << result.estimates.size() << " peaks found\n";
    return false;
  }

  std::vector<bool> used(3, false);
  bool pass = true;
  for (const auto& estimate : result.estimates) {
    double best = 1e9;
    std::size_t match = 0;
    for (std::size_t s = 0; s < scene.sources.size(); ++s) {
      const double d = srp_grid::angular_distance(
          estimate, {scene.sources[s].azimuth, scene.sources[s].elevation, 0.0});
      if (!used[s] && d < best) {
        best = d;
        match = s;
      }
    }
    used[match] = true;
    const bool ok = best <= 6.0;
    pass = pass && ok;
    out << "    peak (" << estimate.azimuth << ", " << estimate.elevation << ") -> source ("
        << scene.sources[match].azimuth << ", " << scene.sources[match].elevation << "), "
        << best << " deg" << (ok ? "" : "  <-- FAIL") << "\n";
  }
  return pass;
}

// --- criterion 3: frequency path vs the literal time-domain sum -------------

bool oracle_equivalence(std::ostream& out) {
  std::mt19937 rng(1312);
  std::uniform_int_distribution<std::size_t> len(4, 256);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = len(rng);
    spectral::SignalFrame x1{white_noise(n, 100 + trial), 16000.0};
    spectral::SignalFrame x2{white_noise(n, 5000 + trial), 16000.0};
    const auto reference = spectral::xcorr_time(x1, x2);
    const auto fast = spectral::xcorr_freq(x1, x2);
    double max_ref = 0.0, max_diff = 0.0;
    for (std::size_t i = 0; i < reference.values.size(); ++i) {
      max_ref = std::max(max_ref, std::abs(reference.values[i]));
      max_diff = std::max(max_diff, std::abs(reference.values[i] - fast.values[i]));
    }
    worst = std::max(worst, max_diff / max_ref);
  }
  out << "    worst relative error over 100 random frame pairs: " << worst << "\n";
  return worst <= 1e-9;
}

// --- criterion 4: distance sweep MSE trend -----------------------------------

bool mse_trend(std::ostream& out) {
  SceneConfig base;
  base.sources.push_back({-4.0, -45.0, 1.5, 1.0, Excitation::white_noise, {}});
  base.noise_rms = 4.0;  // fixed sensor noise; 1/r decay lowers SNR with distance
  base.duration = 0.5;
  base.seed = 424242;

  pipeline::LocalizerConfig config;
  pipeline::SweepParams params;
  params.distances = pipeline::default_sweep_distances();
  params.trials = 20;

  const auto rows = pipeline::run_distance_sweep(base, params, config);
  std::vector<double> distances, mses;
  for (const auto& row : rows) {
    distances.push_back(row.distance);
    mses.push_back(row.mse_deg2);
  }
  const double rho = spearman(distances, mses);
  out << "    MSE at 50 cm: " << mses.front() << " deg^2, at 300 cm: " << mses.back()
      << " deg^2, Spearman rho = " << rho << "\n";
  return rho > 0.5;
}

// --- criterion 5: the louder source ranks first ------------------------------

bool energy_priority(std::ostream& out) {
  pipeline::LocalizerConfig config;
  config.max_sources = 2;
  const pipeline::Localizer engine(config, 16000.0);

  int louder_first = 0;
  const int trials = 50;
  for (int trial = 0; trial < trials; ++trial) {
    SceneConfig scene;
    scene.sources.push_back({40.0, 10.0, 2.0, 1.0, Excitation::white_noise, {}});
    scene.sources.push_back({-120.0, -20.0, 2.0, 0.5, Excitation::white_noise, {}});  // -6 dB
    scene.noise_rms = 0.05;
    scene.duration = 0.5;
    scene.seed = 6000 + static_cast<std::uint64_t>(trial);
    const auto result = engine.run(scene_sim::synthesize(scene, config.array));
    if (!result.estimates.empty() &&
        srp_grid::angular_distance(result.estimates[0], {40.0, 10.0, 0.0}) <= 10.0)
      ++louder_first;
  }
  out << "    louder source ranked first in " << louder_first << "/" << trials << " trials\n";
  return louder_first >= 48;  // 95% of 50
}

// --- criterion 6: closed-loop convergence ------------------------------------

bool closed_loop(std::ostream& out) {
  SceneConfig scene;
  scene.sources.push_back({90.0, 0.0, 3.0, 2.0, Excitation::white_noise, {}});
  scene.noise_rms = 0.02;
  scene.duration = 0.5;
  scene.seed = 8;

  pipeline::LocalizerConfig config;
  pipeline::TrackingParams params;
  params.duration = 10.0;

  const auto log = pipeline::track_and_drive(scene, config, vehicle::DriveGeometry{}, params);
  if (log.empty()) return false;
  const double final_error = geometry::rad_to_deg(std::abs(log.back().azimuth_error));
  const double final_distance = std::hypot(0.0 - log.back().x, 3.0 - log.back().y);
  const double advance = 3.0 - final_distance;
  out << "    final heading error " << final_error << " deg after " << log.back().t
      << " s, advanced " << advance << " m toward the source\n";
  return final_error < 5.0 && advance >= 0.5;
}

// --- criterion 7: kinematics properties --------------------------------------

bool kinematics(std::ostream& out) {
  const vehicle::DriveGeometry geom;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> uniform(-3.0, 3.0);
  bool pass = true;

  // linearity: exact under power-of-two scaling, round-off otherwise
  for (int trial = 0; trial < 100; ++trial) {
    const vehicle::BodyTwist t{uniform(rng), uniform(rng), uniform(rng)};
    const auto w = vehicle::inverse_kinematics(t, geom);
    const auto w2 = vehicle::inverse_kinematics({2 * t.vx, 2 * t.vy, 2 * t.omega}, geom);
    for (int i = 0; i < 3; ++i) pass = pass && (w2.speeds[i] == 2 * w.speeds[i]);

    const vehicle::BodyTwist u{uniform(rng), uniform(rng), uniform(rng)};
    const double a = uniform(rng), b = uniform(rng);
    const auto mixed = vehicle::inverse_kinematics(
        {a * t.vx + b * u.vx, a * t.vy + b * u.vy, a * t.omega + b * u.omega}, geom);
    const auto wu = vehicle::inverse_kinematics(u, geom);
    for (int i = 0; i < 3; ++i)
      pass = pass && std::abs(mixed.speeds[i] - (a * w.speeds[i] + b * wu.speeds[i])) <= 1e-12;

    // round trips
    const auto twist = vehicle::forward_kinematics(w, geom);
    pass = pass && std::abs(twist.vx - t.vx) <= 1e-12 && std::abs(twist.vy - t.vy) <= 1e-12 &&
           std::abs(twist.omega - t.omega) <= 1e-12;
    const vehicle::WheelSpeeds wheels{{uniform(rng), uniform(rng), uniform(rng)}};
    const auto back = vehicle::inverse_kinematics(vehicle::forward_kinematics(wheels, geom), geom);
    for (int i = 0; i < 3; ++i) pass = pass && std::abs(back.speeds[i] - wheels.speeds[i]) <= 1e-12;
  }

  // pure rotation turns all wheels equally
  const auto spin = vehicle::inverse_kinematics({0, 0, 1.23}, geom);
  pass = pass && spin.speeds[0] == spin.speeds[1] && spin.speeds[1] == spin.speeds[2];

  // pure translation at 120-degree spacing sums to zero
  for (int trial = 0; trial < 100; ++trial) {
    const auto w = vehicle::inverse_kinematics({uniform(rng), uniform(rng), 0.0}, geom);
    pass = pass && std::abs(w.speeds[0] + w.speeds[1] + w.speeds[2]) <= 1e-12;
  }

  out << "    linearity, IK/FK round trips, rotation and translation identities"
      << (pass ? " all hold\n" : " FAILED\n");
  return pass;
}

// --- criterion 8: invariance suite --------------------------------------------

bool invariances(std::ostream& out) {
  bool pass = true;

  // SRP argmax unchanged under a global x10 gain
  {
    const auto scene = single_source(30.0, 10.0, 1.5, 20.0, 17);
    pipeline::LocalizerConfig config;
    config.keep_srp_map = true;
    auto audio = scene_sim::synthesize(scene, config.array);
    const auto base = pipeline::localize(audio, config);
    for (auto& channel : audio.channels)
      for (auto& v : channel) v *= 10.0;
    const auto scaled = pipeline::localize(audio, config);
    const auto argmax = [](const std::vector<double>& v) {
      return std::distance(v.begin(), std::max_element(v.begin(), v.end()));
    };
    const bool ok = argmax(base.srp_map->power) == argmax(scaled.srp_map->power);
    out << "    gain x10 argmax index: " << argmax(base.srp_map->power) << " vs "
        << argmax(scaled.srp_map->power) << (ok ? "\n" : "  <-- FAIL\n");
    pass = pass && ok;
  }

  // delay-table antisymmetry is exact
  {
    const auto array = geometry::cubical_array(0.15);
    const auto grid = srp_grid::build_grid(1.5, 10.0, 10.0);
    const auto pairs = geometry::enumerate_pairs(array);
    std::vector<geometry::MicPair> reversed;
    for (const auto& p : pairs)
      reversed.push_back(geometry::make_pair(p.index_b, p.index_a, array));
    const auto fwd = srp_grid::build_delay_table(grid, array, pairs, 16000.0);
    const auto rev = srp_grid::build_delay_table(grid, array, reversed, 16000.0);
    bool ok = true;
    for (std::size_t i = 0; i < fwd.shifts.size(); ++i)
      ok = ok && (rev.shifts[i] == -fwd.shifts[i]);
    out << "    delay-table antisymmetry over " << fwd.shifts.size() << " entries"
        << (ok ? " exact\n" : "  <-- FAIL\n");
    pass = pass && ok;
  }

  // PHAT peak bound
  {
    std::mt19937 rng(2718);
    std::uniform_int_distribution<std::size_t> len(16, 1024);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = len(rng);
      spectral::SignalFrame x1{white_noise(n, 40 + trial), 16000.0};
      spectral::SignalFrame x2{white_noise(n, 80 + trial), 16000.0};
      const auto corr = spectral::gcc_phat(x1, x2);
      for (double v : corr.values) worst = std::max(worst, std::abs(v));
    }
    const bool ok = worst <= 1.0 + 1e-9;
    out << "    largest |GCC-PHAT| value over 100 frames: " << worst
        << (ok ? "\n" : "  <-- FAIL\n");
    pass = pass && ok;
  }
  return pass;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::ostream&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "angle-table reproduction (5 directions, <= 3 deg, <= 10 s each)", table_reproduction},
      {2, "three-source separation (<= 6 deg each, distinct)", three_sources},
      {3, "frequency/time correlation oracle equivalence (<= 1e-9)", oracle_equivalence},
      {4, "distance-sweep MSE trend (Spearman rho > 0.5)", mse_trend},
      {5, "louder source ranked first (>= 95% of 50 trials)", energy_priority},
      {6, "closed loop: 90 deg start -> < 5 deg, advance >= 0.5 m in 10 s", closed_loop},
      {7, "omni-drive kinematics identities", kinematics},
      {8, "invariance suite (gain, antisymmetry, PHAT bound)", invariances},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), criterion.id) == selected.end())
      continue;
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail << "    exception: " << e.what() << "\n";
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
              << criterion.name << "\n"
              << detail.str();
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
