// reservoir.hpp: Engineered-reservoir rates and their squeezed-vacuum picture

#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

namespace sps {

// Coefficients of the phonon-mediated Liouvillian
//   γs D[S⁻] + γn D[S⁺] - γm (2S⁺ρS⁺e^{2iφ} + 2S⁻ρS⁻e^{-2iφ}),  D[A]ρ = 2AρA† - A†Aρ - ρA†A,
// plus the radiative rate Γ of ½Γ D[S⁻].
struct ReservoirRates {
    double gamma_s{0.0};
    double gamma_n{0.0};
    double gamma_m{0.0};
    double phi{0.0};        // squeezing phase, 2φ = φ1 + φ2
    double gamma_rad{0.0};  // Γ
    // inputs, kept for provenance
    double gamma1{0.0};
    double gamma2{0.0};
    double nbar{0.0};
};

// γs = γ1n̄ + γ2(n̄+1), γn = γ1(n̄+1) + γ2n̄, γm = (2n̄+1)√(γ1γ2), φ = (φ1+φ2)/2.
ReservoirRates reservoir_rates(double gamma1, double gamma2, double nbar, double phi1 = 0.0,
                               double phi2 = 0.0, double gamma_rad = 0.0);

// Same, with the squeezing phase given directly.
ReservoirRates reservoir_rates_with_phase(double gamma1, double gamma2, double nbar, double phi,
                                          double gamma_rad = 0.0);

enum class Regime {
    Ordinary,  // γ2 > γ1, net damping
    Inverted,  // γ1 > γ2, net pumping
    Perfect,   // γ1 = γ2
};

std::string_view to_string(Regime regime);

// |γ1-γ2| <= 1e-9 max(γ1,γ2) counts as Perfect.
inline constexpr double kPerfectRegimeRelTol = 1e-9;
Regime classify_regime(double gamma1, double gamma2);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct SqueezingDescriptor {
    Regime regime{Regime::Perfect};
    double gamma_eff{0.0};     // γ (Ordinary) or γI (Inverted); 0 for Perfect
    double n_photons{0.0};     // N; +inf for Perfect
    double m_abs{0.0};         // |M|; +inf for Perfect
    double n_squeezed{0.0};    // Ns with Ns(Ns+1) = |M|²; +inf for Perfect
    double n_background{0.0};  // Nb = N - Ns; 0 in the Perfect limit
    double correlation_gap{0.0};  // |M|² - N(N+1) = -n̄(n̄+1), finite in every regime
    double excess_correlation{0.0};  // |M| - N; 1/2 in the Perfect limit
    bool quantum{false};       // |M| > N
};

SqueezingDescriptor map_to_squeezing(const ReservoirRates& rates);

// Largest n̄ for which |M| > N. +inf when γ1 = γ2 (quantum at every n̄).
double quantum_threshold(double gamma1, double gamma2);

// Uniform axis; with include_lower = false the points are lo + (hi-lo)k/count, k = 1..count.
struct GridAxis {
    double lo{0.0};
    double hi{1.0};
    std::size_t count{2};
    bool include_lower{true};

    std::vector<double> points() const;
    double spacing() const;
};

GridAxis default_nbar_axis();   // [0, 3], 201 points
GridAxis default_ratio_axis();  // (1, 10], 201 points

struct SurfacePoint {
    double nbar{0.0};
    double ratio{0.0};  // γ2/γ1
    double value{0.0};  // NaN where masked
};

// |M|/N over (n̄, γ2/γ1), γ1 = 1, row-major with n̄ outer.
std::vector<SurfacePoint> figure3_dataset(const GridAxis& nbar_axis, const GridAxis& ratio_axis);

// Nb/(|M|-Ns) over (n̄, γ2/γ1); NaN where |M| - Ns <= 0.
std::vector<SurfacePoint> figure4_dataset(const GridAxis& nbar_axis, const GridAxis& ratio_axis);

} // namespace sps
