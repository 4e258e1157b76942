// SPDX-License-Identifier: Apache-2.0
//
// thzwave - scalar-diffraction toolkit for terahertz wavefront engineering
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "thzwave/errors.hpp"
#include "thzwave/metrics.hpp"
#include "thzwave/oam_link.hpp"
#include "thzwave/parallel.hpp"
#include "thzwave/scenario.hpp"

namespace py = pybind11;
using namespace thzwave;

namespace
{
    template <typename T>
    py::array_t<T> to_numpy(const Array2D<T> &a)
    {
        py::array_t<T> out({a.rows(), a.cols()});
        std::copy(a.begin(), a.end(), out.mutable_data());
        return out;
    }

    Array2D<Complex> from_numpy(const py::array_t<Complex, py::array::c_style | py::array::forcecast> &a)
    {
        if (a.ndim() != 2)
            throw InvalidArgument("expected a 2-D complex array");
        Array2D<Complex> out(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
        std::copy(a.data(), a.data() + a.size(), out.data());
        return out;
    }
} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "thzwave core: aperture synthesis, propagation, metrics, OAM link and scenarios";
    m.attr("__version__") = std::string(toolkit_version());

    auto base = py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<SamplingError>(m, "SamplingError", base.ptr());
    py::register_exception<EvanescentDesignError>(m, "EvanescentDesignError", base.ptr());
    py::register_exception<CausticDesignError>(m, "CausticDesignError", base.ptr());
    py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
    py::register_exception<NoBeamError>(m, "NoBeamError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    // InvalidArgument derives from std::invalid_argument, which pybind11 maps to ValueError.

    m.def("set_thread_count", &set_thread_count, py::arg("threads"));
    m.def("thread_count", &thread_count);

    // ---- aperture ----
    py::class_<ApertureGrid>(m, "ApertureGrid")
        .def(py::init<double, double, double>(), py::arg("side_length"), py::arg("element_pitch"),
             py::arg("frequency"))
        .def_property_readonly("side_length", &ApertureGrid::side_length)
        .def_property_readonly("element_pitch", &ApertureGrid::element_pitch)
        .def_property_readonly("frequency", &ApertureGrid::frequency)
        .def_property_readonly("wavelength", &ApertureGrid::wavelength)
        .def_property_readonly("wavenumber", &ApertureGrid::wavenumber)
        .def_property_readonly("elements_per_side", &ApertureGrid::elements_per_side)
        .def("coordinate", &ApertureGrid::coordinate)
        .def("at_frequency", &ApertureGrid::at_frequency)
        .def("__repr__", [](const ApertureGrid &g) {
            return "ApertureGrid(side_length=" + format_number(g.side_length()) +
                   ", pitch=" + format_number(g.element_pitch()) + ", frequency=" + format_number(g.frequency()) +
                   ", N=" + std::to_string(g.elements_per_side()) + ")";
        });
    m.def("make_grid", &make_grid, py::arg("side_length"), py::arg("frequency"), py::arg("pitch_fraction") = 0.5);

    py::enum_<SpotConvention>(m, "SpotConvention")
        .value("fwhm", SpotConvention::fwhm)
        .value("first_null", SpotConvention::first_null);

    py::class_<AxiconDesign>(m, "AxiconDesign")
        .def_readonly("radial_wavenumber", &AxiconDesign::radial_wavenumber)
        .def_readonly("cone_angle", &AxiconDesign::cone_angle)
        .def_readonly("z_max", &AxiconDesign::z_max)
        .def_readonly("spot_size", &AxiconDesign::spot_size)
        .def_readonly("ring_count_within_aperture", &AxiconDesign::ring_count_within_aperture);
    m.def("axicon_design", &axicon_design, py::arg("grid"), py::arg("spot_size"),
          py::arg("convention") = SpotConvention::fwhm);
    m.def("j0_half_power_root", &j0_half_power_root);
    m.def("j0_zero", &j0_zero, py::arg("n"));

    py::class_<ApertureField>(m, "ApertureField")
        .def(py::init([](const ApertureGrid &g, const py::array_t<Complex> &w) {
                 return ApertureField(g, from_numpy(w));
             }),
             py::arg("grid"), py::arg("weights"))
        .def_property_readonly("grid", &ApertureField::grid)
        .def_property_readonly("weights", [](const ApertureField &f) { return to_numpy(f.weights()); })
        .def("power", &ApertureField::power);

    py::enum_<ObstacleShape>(m, "ObstacleShape")
        .value("disc", ObstacleShape::disc)
        .value("square", ObstacleShape::square)
        .value("half_plane", ObstacleShape::half_plane);
    py::class_<ObstacleSpec>(m, "ObstacleSpec")
        .def(py::init([](ObstacleShape shape, double size, double cx, double cy, double z) {
                 return ObstacleSpec{shape, size, cx, cy, z};
             }),
             py::arg("shape"), py::arg("size"), py::arg("center_x") = 0.0, py::arg("center_y") = 0.0,
             py::arg("plane_z"))
        .def_readwrite("shape", &ObstacleSpec::shape)
        .def_readwrite("size", &ObstacleSpec::size)
        .def_readwrite("center_x", &ObstacleSpec::center_x)
        .def_readwrite("center_y", &ObstacleSpec::center_y)
        .def_readwrite("plane_z", &ObstacleSpec::plane_z);

    // ---- wavefronts ----
    py::enum_<WavefrontKind>(m, "WavefrontKind")
        .value("planar", WavefrontKind::planar)
        .value("focusing", WavefrontKind::focusing)
        .value("bessel", WavefrontKind::bessel)
        .value("caustic", WavefrontKind::caustic);
    py::enum_<ApertureShape>(m, "ApertureShape")
        .value("square", ApertureShape::square)
        .value("circular", ApertureShape::circular);

    py::class_<WavefrontSpec>(m, "WavefrontSpec")
        .def(py::init([](WavefrontKind kind, std::string label, double steer_theta, double steer_phi,
                         std::optional<double> focal_length, double spot_size, std::vector<double> caustic,
                         double caustic_z_end, int oam_mode, ApertureShape aperture,
                         std::optional<double> taper_waist, int quantize_bits) {
                 WavefrontSpec s;
                 s.kind = kind;
                 s.label = std::move(label);
                 s.steer = Direction::from_angles(steer_theta, steer_phi);
                 s.focal_length = focal_length;
                 s.spot_size = spot_size;
                 s.caustic_coefficients = std::move(caustic);
                 s.caustic_z_end = caustic_z_end;
                 s.oam_mode = oam_mode;
                 s.aperture = aperture;
                 s.taper_waist = taper_waist;
                 s.quantize_bits = quantize_bits;
                 return s;
             }),
             py::arg("kind"), py::arg("label") = "", py::arg("steer_theta") = 0.0, py::arg("steer_phi") = 0.0,
             py::arg("focal_length") = py::none(), py::arg("spot_size") = 0.0,
             py::arg("caustic_coefficients") = std::vector<double>{}, py::arg("caustic_z_end") = 0.0,
             py::arg("oam_mode") = 0, py::arg("aperture") = ApertureShape::square,
             py::arg("taper_waist") = py::none(), py::arg("quantize_bits") = 0)
        .def_readwrite("kind", &WavefrontSpec::kind)
        .def_readwrite("label", &WavefrontSpec::label)
        .def_readwrite("focal_length", &WavefrontSpec::focal_length)
        .def_readwrite("spot_size", &WavefrontSpec::spot_size)
        .def_readwrite("oam_mode", &WavefrontSpec::oam_mode)
        .def_readwrite("quantize_bits", &WavefrontSpec::quantize_bits);

    m.def(
        "synthesize", [](const ApertureGrid &g, const WavefrontSpec &s) { return synthesize(g, s).field; },
        py::arg("grid"), py::arg("spec"), "Composed aperture field for a wavefront spec.");

    // ---- propagation ----
    py::class_<PropagationPlan>(m, "PropagationPlan")
        .def(py::init([](int pad, bool cutoff, bool band_limit) {
                 PropagationPlan p;
                 p.pad_factor = pad;
                 p.evanescent_cutoff = cutoff;
                 p.band_limit = band_limit;
                 return p;
             }),
             py::arg("pad_factor") = 2, py::arg("evanescent_cutoff") = true, py::arg("band_limit") = true)
        .def_readwrite("pad_factor", &PropagationPlan::pad_factor)
        .def_readwrite("evanescent_cutoff", &PropagationPlan::evanescent_cutoff)
        .def_readwrite("band_limit", &PropagationPlan::band_limit);

    py::class_<FieldSlice>(m, "FieldSlice")
        .def_readonly("z", &FieldSlice::z)
        .def_property_readonly("pitch", &FieldSlice::pitch)
        .def_property_readonly("origin", [](const FieldSlice &s) {
            return py::make_tuple(s.sampling.origin_x, s.sampling.origin_y);
        })
        .def_property_readonly("samples", [](const FieldSlice &s) { return to_numpy(s.samples); })
        .def("intensity", [](const FieldSlice &s) { return to_numpy(s.intensity()); })
        .def("power", &FieldSlice::power)
        .def("crop", &FieldSlice::crop);

    m.def("propagate_asm", &propagate_asm, py::arg("field"), py::arg("z"), py::arg("plan") = PropagationPlan{},
          py::call_guard<py::gil_scoped_release>());
    m.def("propagate_with_obstacles",
          [](const ApertureField &f, const std::vector<ObstacleSpec> &obs, double z, const PropagationPlan &p) {
              return propagate_with_obstacles(f, obs, z, p);
          },
          py::arg("field"), py::arg("obstacles"), py::arg("z"), py::arg("plan") = PropagationPlan{},
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "axial_scan",
        [](const ApertureField &f, const std::vector<double> &z) { return axial_scan(f, z); },
        py::arg("field"), py::arg("z_values"), py::call_guard<py::gil_scoped_release>());

    // ---- metrics ----
    m.def(
        "normalized_gain", [](const ApertureField &f, double x, double y, double z) {
            return normalized_gain(f, Point3{x, y, z});
        },
        py::arg("field"), py::arg("x"), py::arg("y"), py::arg("z"));
    m.def("fraunhofer_distance", &fraunhofer_distance, py::arg("aperture_extent"), py::arg("wavelength"));
    m.def("aperture_gain_dbi", &aperture_gain_dbi, py::arg("area"), py::arg("wavelength"));
    m.def("numeric_aperture", &numeric_aperture, py::arg("aperture_radius"), py::arg("focal_length"));
    m.def("abbe_spot", &abbe_spot, py::arg("numeric_aperture"), py::arg("wavelength"));
    m.def(
        "self_healing_correlation",
        [](const FieldSlice &b, const FieldSlice &r, std::optional<double> rx) {
            return rx ? self_healing_correlation(b, r, *rx) : self_healing_correlation(b, r);
        },
        py::arg("blocked"), py::arg("reference"), py::arg("rx_radius") = py::none());

    // ---- OAM link ----
    m.def(
        "required_bandwidth",
        [](double rate, std::int64_t modes, std::int64_t qam) {
            return required_bandwidth({rate, modes, qam});
        },
        py::arg("target_rate"), py::arg("n_modes"), py::arg("qam_order"));
    m.def(
        "crosstalk_matrix",
        [](const ApertureGrid &g, const WavefrontSpec &base, const std::vector<int> &modes, double z,
           double steer_angle, double rx_radius) {
            const CrosstalkMatrix c = crosstalk_matrix(g, base, modes, z, steer_angle, rx_radius);
            py::array_t<double> out({modes.size(), modes.size()});
            auto v = out.mutable_unchecked<2>();
            for (std::size_t r = 0; r < modes.size(); ++r)
                for (std::size_t t = 0; t < modes.size(); ++t)
                    v(r, t) = c.power_coupling_db(r, t);
            return out;
        },
        py::arg("grid"), py::arg("base"), py::arg("modes"), py::arg("z"), py::arg("steer_angle"),
        py::arg("rx_radius"), "Coupling in dB, indexed [rx, tx].");

    // ---- scenarios ----
    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readwrite("name", &ScenarioConfig::name)
        .def("to_ini", [](const ScenarioConfig &c) { return to_ini(c); })
        .def("validate", &ScenarioConfig::validate);
    m.def("parse_scenario", &parse_scenario, py::arg("ini_text"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("preset", &preset, py::arg("name"));
    m.def("preset_names", &preset_names);
    m.def(
        "run_scenario",
        [](const ScenarioConfig &c, std::optional<std::filesystem::path> out) {
            RunOptions o;
            o.output_directory = std::move(out);
            const RunManifest mf = run_scenario(c, o);
            py::list artifacts;
            for (const auto &a : mf.artifacts)
                artifacts.append(py::make_tuple(a.path, a.sha256, a.bytes));
            return py::make_tuple(mf.config_digest, artifacts);
        },
        py::arg("config"), py::arg("output_directory") = py::none(),
        "Runs every stage; returns (config_sha256, [(path, sha256, bytes), ...]).");
}
