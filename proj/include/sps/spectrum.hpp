// spectrum.hpp: Analytic fluorescence spectrum of the driven dot
//
// S_in(ω) = 2 Re Λ(z) at z = -i(ω - ω0), with Λ the Laplace transform of
// ⟨δS⁺(0)δS⁻(τ)⟩ built from the driven Bloch equations. Radiative Γ is carried
// through the damping triple when rates.gamma_rad > 0.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sps/bloch.hpp"
#include "sps/reservoir.hpp"
#include "sps/spectrum_result.hpp"

namespace sps {

// ⟨δS⁺δSα⟩ at the stationary point, α = x, y, z.
struct FluctuationMoments {
    std::complex<double> cx;
    std::complex<double> cy;
    std::complex<double> cz;

    // ⟨δS⁺δS⁻⟩ = cx - i cy = 1/2 + Sz - |⟨S⁺⟩|²
    std::complex<double> total() const;
};

FluctuationMoments steady_fluctuations(const BlochVector& steady);

// Everything the Laplace-domain spectrum needs, evaluated once.
struct AnalyticSpectrumModel {
    DrivenSystem system;
    BlochVector steady;
    FluctuationMoments moments;
    // Weight of the non-decaying fluctuation (coefficient of 2πδ(ω-ω0)); the
    // matching 1/z pole is removed from lambda().
    double central_delta_weight{0.0};

    // Λ(z) without the 1/z pole.
    std::complex<double> lambda(std::complex<double> z) const;
    // 2 Re Λ(-iδ)
    double incoherent(double delta) const;
    double coherent_weight() const;
};

AnalyticSpectrumModel analytic_spectrum_model(const ReservoirRates& rates, double omega,
                                              PhaseChoice phase, double sx0);

std::complex<double> lambda_laplace(std::complex<double> z, const ReservoirRates& rates,
                                    double omega, PhaseChoice phase, double sx0);

// ω - ω0 ∈ [-2Ω, 2Ω], 2001 points.
std::vector<double> default_spectrum_grid(double omega, std::size_t points = 2001);

SpectrumResult exact_incoherent_spectrum(const ReservoirRates& rates, double omega,
                                         PhaseChoice phase, double sx0,
                                         std::span<const double> omega_grid);

// Three-Lorentzian strong-field form; metadata "strong_field_warning" is set when
// Ω < 10·max(γy, γz). With γx = 0 the central term moves to central_delta_weight.
SpectrumResult strong_field_spectrum(const ReservoirRates& rates, double omega,
                                     PhaseChoice phase, double sx0,
                                     std::span<const double> omega_grid);

// (1/2π)∫ S_in dω over the whole real line: Gauss-Kronrod in θ with δ = s·tan θ,
// split at the line centres. Excludes the central δ weight.
double analytic_incoherent_integral(const AnalyticSpectrumModel& model);

// Rabi sideband poles of Λ and their residues. The lower sideband (ω - ω0 ≈ -Ω)
// belongs to the root with positive imaginary part.
struct SidebandResidues {
    std::complex<double> lower_pole;
    std::complex<double> upper_pole;
    std::complex<double> lower_residue;
    std::complex<double> upper_residue;
};

// Requires Ω > |γz - γy|/2 (complex roots). Throws PreconditionError otherwise.
SidebandResidues sideband_residues(const AnalyticSpectrumModel& model);

// Prominence of the highest local maximum of `spectrum` within
// |ω - ω0 - center| <= half_width, relative to the global peak; 0 without one.
double local_peak_ratio(const SpectrumResult& spectrum, double center, double half_width);

// (sx0, ω - ω0, S_in) surface for the phase-π/2, γ1 = γ2 dot.
struct Figure5Options {
    double gamma0{1.0};
    double nbar{0.5};
    double omega{20.0};
    // Replace the central δ by a Lorentzian of width γ0 carrying the same weight.
    bool render_central_delta{false};
};

struct Figure5Row {
    double sx0;
    double delta;
    double s_in;
};

std::vector<double> default_sx0_axis(std::size_t points = 21);  // [-1/2, 1/2]

std::vector<Figure5Row> figure5_dataset(std::span<const double> sx0_axis,
                                        std::span<const double> delta_axis,
                                        const Figure5Options& options = {});

} // namespace sps
