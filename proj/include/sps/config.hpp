// config.hpp: Run configuration for the sps tool
//
// Plain text, one `key = value` per line, `#` starts a comment. Sections:
//
//   [bath]   alpha (GHz^-2), omega_c (GHz), temperature (K) | nbar
//   [drive]  omega1, omega2, detuning, Omega (GHz); phi1, phi2, laser_phase (rad);
//            Gamma (GHz); include_B (true|false)
//   [rates]  gamma1, gamma2, Omega, Gamma (GHz); nbar; phi (rad)
//   [run]    engine, model, initial state, time/frequency grids, figure axes, sweep
//
// [bath]+[drive] is the physical mode, [rates] the direct-rate mode; a file may
// use one or neither, never both. Numbers accept `pi` in products and quotients
// such as `pi/2` or `-3*pi/4`.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sps/bloch.hpp"
#include "sps/physparams.hpp"
#include "sps/reservoir.hpp"

namespace sps {

enum class Engine { Analytic, Numeric, Both };
enum class RateMode { None, Physical, Direct };
// Analytic spectrum flavour: exact Laplace-domain roots or the strong-field form.
enum class SpectrumModel { Exact, StrongField };

std::string_view to_string(Engine engine);
// Throws ConfigError (line 0) for an unknown name.
Engine parse_engine(std::string_view name);

struct DirectRates {
    double gamma1{0.0};
    double gamma2{0.0};
    double nbar{0.0};
    double phi{0.0};
    double omega{0.0};  // exciting-laser Rabi frequency
    double gamma_rad{0.0};
};

struct PhysicalSetup {
    PhononBathSpec bath;
    DriveConfig drive;
    double gamma_rad{0.0};
    bool include_displacement{false};
};

struct SweepSpec {
    std::string key;  // "section.key", e.g. "rates.nbar"
    std::vector<double> values;
};

struct RunConfig {
    RateMode mode{RateMode::None};
    DirectRates direct;
    PhysicalSetup physical;

    Engine engine{Engine::Analytic};
    SpectrumModel spectrum_model{SpectrumModel::Exact};
    // Without run.sz0 the state is the pure state with Sz <= 0 at (sx0, sy0).
    BlochVector initial{0.0, 0.0, -0.5};

    std::optional<double> t_max;  // default 10/γ̄
    std::size_t t_points{201};

    std::optional<double> omega_min;  // default -2Ω
    std::optional<double> omega_max;  // default +2Ω
    std::size_t omega_points{2001};

    std::size_t sx0_points{21};
    bool render_central_delta{false};

    GridAxis nbar_axis{default_nbar_axis()};
    GridAxis ratio_axis{default_ratio_axis()};

    std::optional<SweepSpec> sweep;
};

// Throws ConfigError carrying the offending line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Sets one numeric "section.key" field as if it appeared in the file. Used by sweeps.
void apply_numeric_override(RunConfig& config, std::string_view dotted_key, double value);

// Parses a number or a product/quotient of numbers and `pi`.
double parse_number(std::string_view text);

// Reservoir rates implied by the configuration. Throws ConfigError when no rate
// section is present.
ReservoirRates resolve_rates(const RunConfig& config);
double resolve_laser_rabi(const RunConfig& config);

} // namespace sps
