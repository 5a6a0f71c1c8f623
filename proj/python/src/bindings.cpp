// Python bindings: sps._core

#include <optional>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sps/bloch.hpp"
#include "sps/commands.hpp"
#include "sps/config.hpp"
#include "sps/errors.hpp"
#include "sps/oracle.hpp"
#include "sps/physparams.hpp"
#include "sps/reservoir.hpp"
#include "sps/spectrum.hpp"

namespace py = pybind11;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) {
        throw py::value_error("expected a one-dimensional array");
    }
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> surface_array(const std::vector<sps::SurfacePoint>& points) {
    py::array_t<double> out({static_cast<py::ssize_t>(points.size()), py::ssize_t{3}});
    auto m = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < m.shape(0); ++i) {
        m(i, 0) = points[static_cast<std::size_t>(i)].nbar;
        m(i, 1) = points[static_cast<std::size_t>(i)].ratio;
        m(i, 2) = points[static_cast<std::size_t>(i)].value;
    }
    return out;
}

sps::GridAxis axis(double lo, double hi, std::size_t count, bool include_lower) {
    return {lo, hi, count, include_lower};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Squeezed phonon reservoir of a driven quantum dot";

    py::register_exception<sps::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const sps::DomainError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const sps::PreconditionError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const sps::NumericalError& e) {
            PyErr_SetString(PyExc_ArithmeticError, e.what());
        } catch (const sps::IoError& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        }
    });

    py::class_<sps::PhononBathSpec>(m, "PhononBathSpec")
        .def(py::init([](double alpha, double omega_c, std::optional<double> temperature,
                         std::optional<double> nbar) {
                 sps::PhononBathSpec b{alpha, omega_c, temperature, nbar};
                 b.validate();
                 return b;
             }),
             py::arg("alpha"), py::arg("omega_c"), py::arg("temperature") = py::none(),
             py::arg("nbar") = py::none())
        .def_readonly("alpha", &sps::PhononBathSpec::alpha)
        .def_readonly("omega_c", &sps::PhononBathSpec::omega_c)
        .def_readonly("temperature", &sps::PhononBathSpec::temperature)
        .def_readonly("nbar", &sps::PhononBathSpec::nbar_override);

    py::class_<sps::DriveConfig>(m, "DriveConfig")
        .def(py::init([](double omega1, double omega2, double detuning, double phi1, double phi2,
                         double laser_rabi) {
                 sps::DriveConfig d{omega1, omega2, phi1, phi2, detuning, laser_rabi, 0.0};
                 d.validate();
                 return d;
             }),
             py::arg("omega1"), py::arg("omega2"), py::arg("detuning"), py::arg("phi1") = 0.0,
             py::arg("phi2") = 0.0, py::arg("laser_rabi") = 0.0)
        .def_readonly("omega1", &sps::DriveConfig::omega1_rabi)
        .def_readonly("omega2", &sps::DriveConfig::omega2_rabi)
        .def_readonly("detuning", &sps::DriveConfig::detuning)
        .def_property_readonly("squeezing_phase", &sps::DriveConfig::squeezing_phase);

    m.def("thermal_occupation", &sps::thermal_occupation, py::arg("omega"), py::arg("temperature"));
    m.def("displacement_factor", &sps::displacement_factor, py::arg("bath"));
    m.def(
        "phonon_rate",
        [](int which, const sps::DriveConfig& drive, const sps::PhononBathSpec& bath,
           bool include_displacement) {
            if (which != 1 && which != 2) {
                throw py::value_error("drive component must be 1 or 2");
            }
            return sps::phonon_rate(static_cast<sps::DriveComponent>(which), drive, bath,
                                    include_displacement);
        },
        py::arg("which"), py::arg("drive"), py::arg("bath"), py::arg("include_displacement") = false);

    py::class_<sps::ReservoirRates>(m, "ReservoirRates")
        .def_readonly("gamma_s", &sps::ReservoirRates::gamma_s)
        .def_readonly("gamma_n", &sps::ReservoirRates::gamma_n)
        .def_readonly("gamma_m", &sps::ReservoirRates::gamma_m)
        .def_readonly("phi", &sps::ReservoirRates::phi)
        .def_readonly("gamma_rad", &sps::ReservoirRates::gamma_rad)
        .def_readonly("gamma1", &sps::ReservoirRates::gamma1)
        .def_readonly("gamma2", &sps::ReservoirRates::gamma2)
        .def_readonly("nbar", &sps::ReservoirRates::nbar);

    m.def("reservoir_rates", &sps::reservoir_rates_with_phase, py::arg("gamma1"), py::arg("gamma2"),
          py::arg("nbar"), py::arg("phi") = 0.0, py::arg("gamma_rad") = 0.0);

    py::class_<sps::SqueezingDescriptor>(m, "SqueezingDescriptor")
        .def_property_readonly("regime",
                               [](const sps::SqueezingDescriptor& d) {
                                   return std::string(sps::to_string(d.regime));
                               })
        .def_readonly("gamma_eff", &sps::SqueezingDescriptor::gamma_eff)
        .def_readonly("N", &sps::SqueezingDescriptor::n_photons)
        .def_readonly("M_abs", &sps::SqueezingDescriptor::m_abs)
        .def_readonly("Ns", &sps::SqueezingDescriptor::n_squeezed)
        .def_readonly("Nb", &sps::SqueezingDescriptor::n_background)
        .def_readonly("correlation_gap", &sps::SqueezingDescriptor::correlation_gap)
        .def_readonly("excess_correlation", &sps::SqueezingDescriptor::excess_correlation)
        .def_readonly("quantum", &sps::SqueezingDescriptor::quantum);

    m.def("map_to_squeezing", &sps::map_to_squeezing, py::arg("rates"));
    m.def("quantum_threshold", &sps::quantum_threshold, py::arg("gamma1"), py::arg("gamma2"));

    py::class_<sps::BlochVector>(m, "BlochVector")
        .def(py::init<double, double, double>(), py::arg("sx") = 0.0, py::arg("sy") = 0.0,
             py::arg("sz") = -0.5)
        .def_readwrite("sx", &sps::BlochVector::sx)
        .def_readwrite("sy", &sps::BlochVector::sy)
        .def_readwrite("sz", &sps::BlochVector::sz)
        .def("is_physical", &sps::BlochVector::is_physical, py::arg("tol") = 1e-12)
        .def("__repr__", [](const sps::BlochVector& s) {
            return "BlochVector(" + std::to_string(s.sx) + ", " + std::to_string(s.sy) + ", " +
                   std::to_string(s.sz) + ")";
        });

    m.def("free_evolution", &sps::free_evolution, py::arg("state"), py::arg("rates"), py::arg("t"));
    m.def(
        "driven_steady_state",
        [](const sps::ReservoirRates& rates, double omega, const sps::BlochVector& initial) {
            const auto sys =
                sps::driven_system(rates, omega, sps::phase_choice_from(rates.phi), true);
            return sps::driven_steady_state(sys, initial);
        },
        py::arg("rates"), py::arg("omega"), py::arg("initial"));
    m.def(
        "driven_evolution",
        [](const sps::ReservoirRates& rates, double omega, const sps::BlochVector& state, double t) {
            const auto sys =
                sps::driven_system(rates, omega, sps::phase_choice_from(rates.phi), true);
            return sps::driven_evolution(sys, state, t);
        },
        py::arg("rates"), py::arg("omega"), py::arg("state"), py::arg("t"));
    m.def(
        "numeric_steady_state",
        [](const sps::ReservoirRates& rates, double omega, const sps::BlochVector& initial) {
            const auto L = sps::oracle::build_liouvillian(rates, rates.gamma_rad, omega);
            const auto ss = sps::oracle::steady_state(L, sps::oracle::density_from_bloch(initial));
            return sps::oracle::bloch_from_density(ss.rho);
        },
        py::arg("rates"), py::arg("omega"), py::arg("initial"));

    py::class_<sps::SpectrumResult>(m, "SpectrumResult")
        .def_readonly("coherent_weight", &sps::SpectrumResult::coherent_weight)
        .def_readonly("central_delta_weight", &sps::SpectrumResult::central_delta_weight)
        .def_readonly("engine", &sps::SpectrumResult::engine)
        .def_readonly("metadata", &sps::SpectrumResult::metadata)
        .def_property_readonly("omega_grid",
                               [](const sps::SpectrumResult& s) { return to_array(s.omega_grid); })
        .def_property_readonly("incoherent",
                               [](const sps::SpectrumResult& s) { return to_array(s.incoherent); })
        .def("peak", &sps::SpectrumResult::peak);

    m.def(
        "exact_incoherent_spectrum",
        [](const sps::ReservoirRates& rates, double omega, double sx0, py::array_t<double> grid) {
            const auto g = to_vector(grid);
            return sps::exact_incoherent_spectrum(rates, omega, sps::phase_choice_from(rates.phi),
                                                  sx0, g);
        },
        py::arg("rates"), py::arg("omega"), py::arg("sx0"), py::arg("omega_grid"));
    m.def(
        "strong_field_spectrum",
        [](const sps::ReservoirRates& rates, double omega, double sx0, py::array_t<double> grid) {
            const auto g = to_vector(grid);
            return sps::strong_field_spectrum(rates, omega, sps::phase_choice_from(rates.phi), sx0,
                                              g);
        },
        py::arg("rates"), py::arg("omega"), py::arg("sx0"), py::arg("omega_grid"));
    m.def(
        "numeric_spectrum",
        [](const sps::ReservoirRates& rates, double omega, double sx0, py::array_t<double> grid) {
            const auto g = to_vector(grid);
            py::gil_scoped_release release;
            return sps::oracle::numeric_fluorescence(rates, omega, sx0, g).spectrum;
        },
        py::arg("rates"), py::arg("omega"), py::arg("sx0"), py::arg("omega_grid"));

    m.def(
        "figure3_dataset",
        [](double nbar_max, std::size_t nbar_points, double ratio_max, std::size_t ratio_points) {
            return surface_array(sps::figure3_dataset(axis(0.0, nbar_max, nbar_points, true),
                                                      axis(1.0, ratio_max, ratio_points, false)));
        },
        py::arg("nbar_max") = 3.0, py::arg("nbar_points") = 201, py::arg("ratio_max") = 10.0,
        py::arg("ratio_points") = 201);
    m.def(
        "figure4_dataset",
        [](double nbar_max, std::size_t nbar_points, double ratio_max, std::size_t ratio_points) {
            return surface_array(sps::figure4_dataset(axis(0.0, nbar_max, nbar_points, true),
                                                      axis(1.0, ratio_max, ratio_points, false)));
        },
        py::arg("nbar_max") = 3.0, py::arg("nbar_points") = 201, py::arg("ratio_max") = 10.0,
        py::arg("ratio_points") = 201);
    m.def(
        "figure5_dataset",
        [](py::array_t<double> sx0_axis, py::array_t<double> delta_axis, double gamma0,
           double nbar, double omega, bool render_central_delta) {
            const auto sx = to_vector(sx0_axis);
            const auto delta = to_vector(delta_axis);
            const auto rows =
                sps::figure5_dataset(sx, delta, {gamma0, nbar, omega, render_central_delta});
            py::array_t<double> out({static_cast<py::ssize_t>(rows.size()), py::ssize_t{3}});
            auto a = out.mutable_unchecked<2>();
            for (py::ssize_t i = 0; i < a.shape(0); ++i) {
                const auto& r = rows[static_cast<std::size_t>(i)];
                a(i, 0) = r.sx0;
                a(i, 1) = r.delta;
                a(i, 2) = r.s_in;
            }
            return out;
        },
        py::arg("sx0_axis"), py::arg("delta_axis"), py::arg("gamma0") = 1.0, py::arg("nbar") = 0.5,
        py::arg("omega") = 20.0, py::arg("render_central_delta") = false);

    py::class_<sps::RunConfig>(m, "RunConfig")
        .def_property_readonly("mode",
                               [](const sps::RunConfig& c) {
                                   switch (c.mode) {
                                   case sps::RateMode::Physical:
                                       return "physical";
                                   case sps::RateMode::Direct:
                                       return "direct";
                                   case sps::RateMode::None:
                                       break;
                                   }
                                   return "none";
                               })
        .def_property_readonly(
            "engine", [](const sps::RunConfig& c) { return std::string(sps::to_string(c.engine)); })
        .def_readonly("initial", &sps::RunConfig::initial)
        .def("rates", &sps::resolve_rates)
        .def("laser_rabi", &sps::resolve_laser_rabi);

    m.def("parse_config", &sps::parse_config, py::arg("text"));
    m.def(
        "run_subcommand",
        [](const std::string& name, const std::string& config_text, const std::string& out_dir,
           std::optional<std::string> engine, std::optional<std::string> figure) {
            sps::CommandRequest request;
            request.name = name;
            request.figure = figure;
            if (engine) {
                request.engine = sps::parse_engine(*engine);
            }
            request.out_dir = out_dir;
            const auto config = sps::parse_config(config_text);
            const auto outcome = sps::run_subcommand(request, config);
            std::vector<std::string> files;
            for (const auto& f : outcome.files) {
                files.push_back(f.string());
            }
            return py::make_tuple(outcome.exit_status, files, outcome.warnings);
        },
        py::arg("name"), py::arg("config_text"), py::arg("out_dir"), py::arg("engine") = py::none(),
        py::arg("figure") = py::none());
}
