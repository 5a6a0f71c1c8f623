// physparams.hpp: Bath and drive parameters in laboratory units, and the
// microscopic rates derived from them.
//
// Units: frequencies and rates are angular, in GHz (rad/ns) with hbar = 1;
// temperatures in kelvin; alpha in GHz^-2.

#pragma once

#include <optional>

namespace sps {

// CODATA 2018 hbar/kB, expressed in kelvin per GHz of angular frequency.
inline constexpr double kHbarOverKbKelvinPerGHz = 1.054571817e-34 / 1.380649e-23 * 1.0e9;

struct PhononBathSpec {
    double alpha{0.0};                    // GHz^-2
    double omega_c{0.0};                  // GHz
    std::optional<double> temperature;    // K
    std::optional<double> nbar_override;  // mean occupation at the drive detuning

    // Throws DomainError when alpha <= 0, omega_c <= 0, T < 0, n̄ < 0, or both
    // temperature and nbar_override are set.
    void validate() const;
};

struct DriveConfig {
    double omega1_rabi{0.0};  // Ω1, GHz (component tuned above resonance)
    double omega2_rabi{0.0};  // Ω2, GHz
    double phi1{0.0};         // rad
    double phi2{0.0};         // rad
    double detuning{0.0};     // Δ = Δ1 = Δ2, GHz
    double laser_rabi{0.0};   // Ω of the resonant exciting laser, GHz
    double laser_phase{0.0};  // φL, rad

    void validate() const;

    // φ with 2φ = φ1 + φ2, where 2φ is first reduced to [0, 2π).
    double squeezing_phase() const;
};

// Bose-Einstein occupation 1/(exp(ħω/kBT) - 1); 0 at T = 0.
double thermal_occupation(double omega, double temperature);

// J(ω) = α ω³ exp[-(ω/ωc)²].
double spectral_density(double omega, const PhononBathSpec& bath);

// Location of the single maximum of J, ωc·sqrt(3/2).
double spectral_density_peak(const PhononBathSpec& bath);

// J(ω)/max J, used to flag detunings outside the phonon band.
double band_support(double omega, const PhononBathSpec& bath);

// Occupation at mode frequency omega: nbar_override if present, otherwise the
// Bose factor at the bath temperature (0 when no temperature is given).
double bath_occupation(double omega, const PhononBathSpec& bath);

// ⟨B⟩ = exp[-½ ∫₀^∞ dω J(ω)/ω² (2n̄(ω,T)+1)], integrated on [0, 8ωc].
// The occupation comes from the temperature only; nbar_override (defined at a
// single frequency) does not enter. Throws NumericalError on non-convergence.
double displacement_factor(const PhononBathSpec& bath);

struct DisplacementIntegral {
    double value{0.0};           // ∫ J(ω)/ω² (2n̄+1) dω
    double error_estimate{0.0};  // Gauss-Kronrod error estimate
    unsigned max_depth{0};       // bisection depth allowed
};
DisplacementIntegral displacement_integral(const PhononBathSpec& bath);

enum class DriveComponent { First = 1, Second = 2 };

// γi = 2π Ω̃i² α Δ. Ω̃i = ⟨B⟩Ωi with include_displacement, else the bare Ωi.
double phonon_rate(DriveComponent which, const DriveConfig& drive, const PhononBathSpec& bath,
                   bool include_displacement = false);

// Below this band_support value phonon_rate's Markov/band estimate is suspect.
inline constexpr double kBandSupportWarning = 1e-6;

} // namespace sps
