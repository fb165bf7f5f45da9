#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "srploc/config_json.hpp"
#include "srploc/errors.hpp"
#include "srploc/geometry.hpp"
#include "srploc/pipeline.hpp"
#include "srploc/scene_sim.hpp"
#include "srploc/spectral.hpp"
#include "srploc/srp_grid.hpp"
#include "srploc/vehicle.hpp"
#include "srploc/wav_io.hpp"

namespace py = pybind11;
using namespace srploc;

namespace {

AudioBuffer buffer_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& samples,
                              double sample_rate) {
  if (samples.ndim() != 2)
    throw InvalidArgument("samples must be a 2-D array of shape (channels, samples)");
  AudioBuffer audio;
  audio.sample_rate = sample_rate;
  const auto channels = static_cast<std::size_t>(samples.shape(0));
  const auto count = static_cast<std::size_t>(samples.shape(1));
  audio.channels.assign(channels, std::vector<double>(count));
  const auto view = samples.unchecked<2>();
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t n = 0; n < count; ++n) audio.channels[c][n] = view(c, n);
  return audio;
}

py::array_t<double> numpy_from_buffer(const AudioBuffer& audio) {
  const auto channels = static_cast<py::ssize_t>(audio.channel_count());
  const auto count = static_cast<py::ssize_t>(audio.sample_count());
  py::array_t<double> out({channels, count});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t c = 0; c < channels; ++c)
    for (py::ssize_t n = 0; n < count; ++n) view(c, n) = audio.channels[c][n];
  return out;
}

spectral::SignalFrame frame_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
                                       double sample_rate) {
  if (x.ndim() != 1) throw InvalidArgument("signal must be a 1-D array");
  spectral::SignalFrame frame;
  frame.sample_rate = sample_rate;
  frame.samples.assign(x.data(), x.data() + x.size());
  return frame;
}

py::array_t<double> numpy_from_vector(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GCC-PHAT grid-search sound source localization core";

  py::register_exception<InvalidArgument>(m, "InvalidArgumentError", PyExc_ValueError);
  py::register_exception<OutOfRange>(m, "OutOfRangeError", PyExc_IndexError);
  py::register_exception<AmbiguousPeak>(m, "AmbiguousPeakError", PyExc_RuntimeError);
  py::register_exception<NoSignal>(m, "NoSignalError", PyExc_RuntimeError);
  py::register_exception<SingularGeometry>(m, "SingularGeometryError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // geometry
  py::class_<geometry::Vec3>(m, "Vec3")
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
      .def_readwrite("x", &geometry::Vec3::x)
      .def_readwrite("y", &geometry::Vec3::y)
      .def_readwrite("z", &geometry::Vec3::z)
      .def("__repr__", [](const geometry::Vec3& v) {
        std::ostringstream s;
        s << "Vec3(" << v.x << ", " << v.y << ", " << v.z << ")";
        return s.str();
      });

  py::class_<geometry::MicArray>(m, "MicArray")
      .def_readonly("mics", &geometry::MicArray::mics)
      .def_readonly("speed_of_sound", &geometry::MicArray::speed_of_sound)
      .def("centroid", &geometry::MicArray::centroid)
      .def("circumradius", &geometry::MicArray::circumradius);

  py::class_<geometry::MicPair>(m, "MicPair")
      .def_readonly("index_a", &geometry::MicPair::index_a)
      .def_readonly("index_b", &geometry::MicPair::index_b)
      .def_readonly("distance", &geometry::MicPair::distance);

  m.def("make_mic_array", &geometry::make_mic_array, py::arg("mics"),
        py::arg("speed_of_sound") = geometry::kDefaultSpeedOfSound);
  m.def("cubical_array", &geometry::cubical_array, py::arg("edge_length"),
        py::arg("speed_of_sound") = geometry::kDefaultSpeedOfSound,
        "8-mic cube-vertex array centered at the origin");
  m.def("mic_array_from_json", &geometry::mic_array_from_json, py::arg("text"));
  m.def("enumerate_pairs", &geometry::enumerate_pairs, py::arg("array"));
  m.def("farfield_tdoa", &geometry::farfield_tdoa, py::arg("distance"), py::arg("angle"),
        py::arg("speed_of_sound"));
  m.def("point_delay_difference", &geometry::point_delay_difference, py::arg("point"),
        py::arg("pair"), py::arg("array"));
  m.def("direction_from_angles", &geometry::direction_from_angles, py::arg("azimuth_deg"),
        py::arg("elevation_deg"));
  m.def("wrap_degrees", &geometry::wrap_degrees, py::arg("degrees"));

  // spectral
  py::enum_<spectral::Window>(m, "Window")
      .value("rectangular", spectral::Window::rectangular)
      .value("hann", spectral::Window::hann);

  py::class_<spectral::CorrelationFunction>(m, "CorrelationFunction")
      .def_property_readonly(
          "values", [](const spectral::CorrelationFunction& c) { return numpy_from_vector(c.values); })
      .def_readonly("sample_rate", &spectral::CorrelationFunction::sample_rate)
      .def_property_readonly("max_lag", &spectral::CorrelationFunction::max_lag)
      .def("at_lag", &spectral::CorrelationFunction::at_lag, py::arg("lag"));

  m.def(
      "gcc_phat",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x1,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& x2,
         double sample_rate, double regularization) {
        return spectral::gcc_phat(frame_from_numpy(x1, sample_rate),
                                  frame_from_numpy(x2, sample_rate), regularization);
      },
      py::arg("x1"), py::arg("x2"), py::arg("sample_rate"),
      py::arg("regularization") = spectral::kDefaultPhatRegularization);
  m.def(
      "xcorr_time",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x1,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& x2,
         double sample_rate) {
        return spectral::xcorr_time(frame_from_numpy(x1, sample_rate),
                                    frame_from_numpy(x2, sample_rate));
      },
      py::arg("x1"), py::arg("x2"), py::arg("sample_rate"));
  m.def(
      "xcorr_freq",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x1,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& x2,
         double sample_rate) {
        return spectral::xcorr_freq(frame_from_numpy(x1, sample_rate),
                                    frame_from_numpy(x2, sample_rate));
      },
      py::arg("x1"), py::arg("x2"), py::arg("sample_rate"));
  m.def("tdoa_from_correlation", &spectral::tdoa_from_correlation, py::arg("correlation"));
  m.def("interpolate_correlation", &spectral::interpolate_correlation, py::arg("correlation"),
        py::arg("lag"));

  // srp_grid
  py::class_<srp_grid::SphericalGrid>(m, "SphericalGrid")
      .def_readonly("radius", &srp_grid::SphericalGrid::radius)
      .def_property_readonly(
          "azimuths", [](const srp_grid::SphericalGrid& g) { return numpy_from_vector(g.azimuths); })
      .def_property_readonly(
          "elevations",
          [](const srp_grid::SphericalGrid& g) { return numpy_from_vector(g.elevations); })
      .def("__len__", &srp_grid::SphericalGrid::size)
      .def("flat_index", &srp_grid::SphericalGrid::flat_index, py::arg("elevation_idx"),
           py::arg("azimuth_idx"))
      .def("angle_indices", &srp_grid::SphericalGrid::angle_indices, py::arg("flat"))
      .def("azimuth_of", &srp_grid::SphericalGrid::azimuth_of, py::arg("flat"))
      .def("elevation_of", &srp_grid::SphericalGrid::elevation_of, py::arg("flat"));

  py::class_<srp_grid::DelayTable>(m, "DelayTable")
      .def_readonly("pair_count", &srp_grid::DelayTable::pair_count)
      .def_readonly("point_count", &srp_grid::DelayTable::point_count)
      .def_readonly("max_abs_shift", &srp_grid::DelayTable::max_abs_shift)
      .def("at", &srp_grid::DelayTable::at, py::arg("pair"), py::arg("point"));

  py::class_<srp_grid::SrpMap>(m, "SrpMap")
      .def_property_readonly("power",
                             [](const srp_grid::SrpMap& s) { return numpy_from_vector(s.power); })
      .def_readonly("frames_accumulated", &srp_grid::SrpMap::frames_accumulated);

  py::class_<srp_grid::DoaEstimate>(m, "DoaEstimate")
      .def(py::init([](double az, double el, double power) {
             return srp_grid::DoaEstimate{az, el, power};
           }),
           py::arg("azimuth"), py::arg("elevation"), py::arg("power") = 0.0)
      .def_readonly("azimuth", &srp_grid::DoaEstimate::azimuth)
      .def_readonly("elevation", &srp_grid::DoaEstimate::elevation)
      .def_readonly("power", &srp_grid::DoaEstimate::power)
      .def("__repr__", [](const srp_grid::DoaEstimate& e) {
        std::ostringstream s;
        s << "DoaEstimate(azimuth=" << e.azimuth << ", elevation=" << e.elevation
          << ", power=" << e.power << ")";
        return s.str();
      });

  m.def("build_grid", &srp_grid::build_grid, py::arg("radius"), py::arg("azimuth_step_deg"),
        py::arg("elevation_step_deg"));
  m.def("build_delay_table",
        py::overload_cast<const srp_grid::SphericalGrid&, const geometry::MicArray&, double>(
            &srp_grid::build_delay_table),
        py::arg("grid"), py::arg("array"), py::arg("sample_rate"));
  m.def("make_srp_map", &srp_grid::make_srp_map, py::arg("grid"));
  m.def("accumulate_srp", &srp_grid::accumulate_srp, py::arg("correlations"), py::arg("table"),
        py::arg("map"));
  m.def("find_peaks", &srp_grid::find_peaks, py::arg("map"), py::arg("grid"),
        py::arg("max_sources"), py::arg("suppression_radius_deg"));
  m.def("angular_distance", &srp_grid::angular_distance, py::arg("a"), py::arg("b"));

  // scene_sim
  py::enum_<scene_sim::Excitation>(m, "Excitation")
      .value("white_noise", scene_sim::Excitation::white_noise)
      .value("speech_noise", scene_sim::Excitation::speech_noise)
      .value("file_samples", scene_sim::Excitation::file_samples);

  py::class_<scene_sim::SourceSpec>(m, "SourceSpec")
      .def(py::init<>())
      .def_readwrite("azimuth", &scene_sim::SourceSpec::azimuth)
      .def_readwrite("elevation", &scene_sim::SourceSpec::elevation)
      .def_readwrite("range", &scene_sim::SourceSpec::range)
      .def_readwrite("level", &scene_sim::SourceSpec::level)
      .def_readwrite("excitation", &scene_sim::SourceSpec::excitation)
      .def_readwrite("samples", &scene_sim::SourceSpec::samples);

  py::class_<scene_sim::SceneConfig>(m, "SceneConfig")
      .def(py::init<>())
      .def_readwrite("sources", &scene_sim::SceneConfig::sources)
      .def_readwrite("noise_rms", &scene_sim::SceneConfig::noise_rms)
      .def_readwrite("duration", &scene_sim::SceneConfig::duration)
      .def_readwrite("sample_rate", &scene_sim::SceneConfig::sample_rate)
      .def_readwrite("seed", &scene_sim::SceneConfig::seed);

  m.def("source_position", &scene_sim::source_position, py::arg("source"));
  m.def("noise_rms_for_snr", &scene_sim::noise_rms_for_snr, py::arg("source"), py::arg("snr_db"));
  m.def(
      "synthesize",
      [](const scene_sim::SceneConfig& config, const geometry::MicArray& array) {
        return numpy_from_buffer(scene_sim::synthesize(config, array));
      },
      py::arg("config"), py::arg("array"), "Returns a (channels, samples) array");
  m.def(
      "ground_truth_tdoas",
      [](const scene_sim::SceneConfig& config, const geometry::MicArray& array) {
        return numpy_from_vector(scene_sim::ground_truth_tdoas(config, array));
      },
      py::arg("config"), py::arg("array"));
  m.def("scene_from_json", &config_json::scene_from_json, py::arg("text"),
        py::arg("base_dir") = std::string());

  // vehicle
  py::class_<vehicle::DriveGeometry>(m, "DriveGeometry")
      .def(py::init<>())
      .def_readwrite("wheel_angles_deg", &vehicle::DriveGeometry::wheel_angles_deg)
      .def_readwrite("wheel_radius", &vehicle::DriveGeometry::wheel_radius)
      .def_readwrite("body_radius", &vehicle::DriveGeometry::body_radius);

  py::class_<vehicle::BodyTwist>(m, "BodyTwist")
      .def(py::init<>())
      .def(py::init([](double vx, double vy, double omega) {
             return vehicle::BodyTwist{vx, vy, omega};
           }),
           py::arg("vx"), py::arg("vy"), py::arg("omega"))
      .def_readwrite("vx", &vehicle::BodyTwist::vx)
      .def_readwrite("vy", &vehicle::BodyTwist::vy)
      .def_readwrite("omega", &vehicle::BodyTwist::omega);

  py::class_<vehicle::WheelSpeeds>(m, "WheelSpeeds")
      .def(py::init<>())
      .def_readwrite("speeds", &vehicle::WheelSpeeds::speeds);

  py::class_<vehicle::VehicleState>(m, "VehicleState")
      .def(py::init<>())
      .def_readwrite("x", &vehicle::VehicleState::x)
      .def_readwrite("y", &vehicle::VehicleState::y)
      .def_readwrite("heading", &vehicle::VehicleState::heading);

  py::class_<vehicle::ControllerParams>(m, "ControllerParams")
      .def(py::init<>())
      .def_readwrite("gain", &vehicle::ControllerParams::gain)
      .def_readwrite("max_omega", &vehicle::ControllerParams::max_omega)
      .def_readwrite("forward_speed", &vehicle::ControllerParams::forward_speed)
      .def_readwrite("deadband", &vehicle::ControllerParams::deadband);

  py::class_<vehicle::TrajectorySample>(m, "TrajectorySample")
      .def_readonly("t", &vehicle::TrajectorySample::t)
      .def_readonly("x", &vehicle::TrajectorySample::x)
      .def_readonly("y", &vehicle::TrajectorySample::y)
      .def_readonly("heading", &vehicle::TrajectorySample::heading)
      .def_readonly("azimuth_error", &vehicle::TrajectorySample::azimuth_error)
      .def_readonly("wheels", &vehicle::TrajectorySample::wheels);

  m.def("inverse_kinematics", &vehicle::inverse_kinematics, py::arg("twist"), py::arg("geometry"));
  m.def("forward_kinematics", &vehicle::forward_kinematics, py::arg("wheels"), py::arg("geometry"));
  m.def("heading_controller",
        py::overload_cast<double, const vehicle::ControllerParams&>(&vehicle::heading_controller),
        py::arg("azimuth_error_rad"), py::arg("params"));
  m.def("vehicle_step", &vehicle::step, py::arg("state"), py::arg("twist"), py::arg("dt"));

  // pipeline
  py::class_<pipeline::GridParams>(m, "GridParams")
      .def(py::init<>())
      .def_readwrite("radius", &pipeline::GridParams::radius)
      .def_readwrite("azimuth_step", &pipeline::GridParams::azimuth_step)
      .def_readwrite("elevation_step", &pipeline::GridParams::elevation_step);

  py::class_<pipeline::FrameParams>(m, "FrameParams")
      .def(py::init<>())
      .def_readwrite("length", &pipeline::FrameParams::length)
      .def_readwrite("hop", &pipeline::FrameParams::hop)
      .def_readwrite("window", &pipeline::FrameParams::window);

  py::class_<pipeline::LocalizerConfig>(m, "LocalizerConfig")
      .def(py::init<>())
      .def_readwrite("array", &pipeline::LocalizerConfig::array)
      .def_readwrite("grid", &pipeline::LocalizerConfig::grid)
      .def_readwrite("frames", &pipeline::LocalizerConfig::frames)
      .def_readwrite("regularization", &pipeline::LocalizerConfig::regularization)
      .def_readwrite("max_sources", &pipeline::LocalizerConfig::max_sources)
      .def_readwrite("suppression_radius", &pipeline::LocalizerConfig::suppression_radius)
      .def_readwrite("energy_floor", &pipeline::LocalizerConfig::energy_floor)
      .def_readwrite("keep_srp_map", &pipeline::LocalizerConfig::keep_srp_map);

  py::class_<pipeline::LocalizationResult>(m, "LocalizationResult")
      .def_readonly("estimates", &pipeline::LocalizationResult::estimates)
      .def_readonly("frames_used", &pipeline::LocalizationResult::frames_used)
      .def_readonly("elapsed", &pipeline::LocalizationResult::elapsed)
      .def_property_readonly("srp_map", [](const pipeline::LocalizationResult& r) {
        return r.srp_map ? py::cast(*r.srp_map) : py::none().cast<py::object>();
      });

  py::class_<pipeline::TrackingParams>(m, "TrackingParams")
      .def(py::init<>())
      .def_readwrite("duration", &pipeline::TrackingParams::duration)
      .def_readwrite("control_rate", &pipeline::TrackingParams::control_rate)
      .def_readwrite("audio_window", &pipeline::TrackingParams::audio_window)
      .def_readwrite("stop_range", &pipeline::TrackingParams::stop_range)
      .def_readwrite("controller", &pipeline::TrackingParams::controller);

  py::class_<pipeline::SweepParams>(m, "SweepParams")
      .def(py::init<>())
      .def_readwrite("distances", &pipeline::SweepParams::distances)
      .def_readwrite("trials", &pipeline::SweepParams::trials);

  py::class_<pipeline::SweepRow>(m, "SweepRow")
      .def_readonly("distance", &pipeline::SweepRow::distance)
      .def_readonly("mse_deg2", &pipeline::SweepRow::mse_deg2);

  m.def("validate_config", py::overload_cast<const pipeline::LocalizerConfig&>(&pipeline::validate),
        py::arg("config"));
  m.def(
      "localize",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& samples,
         double sample_rate, const pipeline::LocalizerConfig& config) {
        return pipeline::localize(buffer_from_numpy(samples, sample_rate), config);
      },
      py::arg("samples"), py::arg("sample_rate"), py::arg("config"),
      "samples is a (channels, samples) array, channel i = microphone i");
  m.def("track_and_drive", &pipeline::track_and_drive, py::arg("scene"), py::arg("localizer"),
        py::arg("drive"), py::arg("params"));
  m.def("run_distance_sweep", &pipeline::run_distance_sweep, py::arg("base_scene"),
        py::arg("params"), py::arg("localizer"));
  m.def("default_sweep_distances", &pipeline::default_sweep_distances);

  // wav io
  m.def(
      "read_wav",
      [](const std::string& path) {
        const auto audio = wav_io::read_wav(path);
        return py::make_tuple(numpy_from_buffer(audio), audio.sample_rate);
      },
      py::arg("path"), "Returns ((channels, samples) array, sample_rate)");
  m.def(
      "write_wav",
      [](const std::string& path,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& samples,
         double sample_rate) { wav_io::write_wav(path, buffer_from_numpy(samples, sample_rate)); },
      py::arg("path"), py::arg("samples"), py::arg("sample_rate"));

  m.attr("__version__") = "0.1.0";
}
