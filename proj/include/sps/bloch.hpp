// bloch.hpp: Analytic Bloch-vector dynamics of the dot under the engineered reservoir
//
// Conventions: Sz = (|e⟩⟨e| - |g⟩⟨g|)/2, Sx = (S⁻+S⁺)/2, Sy = i(S⁻-S⁺)/2.
// The resonant exciting laser enters as V_L = Ω Sx (φL = 0).

#pragma once

#include <array>

#include "sps/reservoir.hpp"

namespace sps {

struct BlochVector {
    double sx{0.0};
    double sy{0.0};
    double sz{0.0};

    double norm2() const { return sx * sx + sy * sy + sz * sz; }
    // Inside the Bloch ball of radius 1/2, up to tol.
    bool is_physical(double tol = 1e-12) const { return norm2() <= 0.25 + tol; }
};

BlochVector ground_state();

// ---- free decay (no exciting laser) ---------------------------------------

struct FreeDecayRates {
    double gamma_phi{0.0};       // Γ/2 + γs + γn - 2γm
    double gamma_phi_perp{0.0};  // Γ/2 + γs + γn + 2γm
    double gamma_z{0.0};         // Γ + 2(γs + γn)
    double sz_steady{0.0};       // -(γs - γn + Γ/2) / (2(γs + γn + Γ/2))
};

FreeDecayRates free_decay_rates(const ReservoirRates& rates);

struct Quadratures {
    double s_phi{0.0};       // sx sinφ + sy cosφ
    double s_phi_perp{0.0};  // sx cosφ - sy sinφ
};

// The map is its own inverse: applying it to (s_phi, s_phi_perp) returns (sx, sy).
Quadratures quadrature(const BlochVector& state, double phi);

// Closed-form free evolution at general φ and Γ. Throws DomainError for t < 0.
BlochVector free_evolution(const BlochVector& state0, const ReservoirRates& rates, double t);

// ---- driven dot ------------------------------------------------------------

// The driven analysis is restricted to squeezing phases 0 and π/2 (mod π).
enum class PhaseChoice { PhiZero, PhiHalfPi };

double phase_value(PhaseChoice choice);
// Maps φ (mod π) to a PhaseChoice; throws DomainError for other phases.
PhaseChoice phase_choice_from(double phi, double tol = 1e-9);

struct DampingTriple {
    double gamma_x{0.0};
    double gamma_y{0.0};
    double gamma_z{0.0};
    PhaseChoice sign_convention{PhaseChoice::PhiZero};
};

// φ = 0:   γx = γs+γn+2γm, γy = γs+γn-2γm;  φ = π/2: swapped;  γz = 2(γs+γn).
// With include_radiative the Γ terms are added (γx,γy += Γ/2, γz += Γ).
DampingTriple damping_triple(const ReservoirRates& rates, PhaseChoice phase,
                             bool include_radiative = false);

// d⟨Sx⟩/dt = -γx Sx
// d⟨Sy⟩/dt = -γy Sy - Ω Sz
// d⟨Sz⟩/dt = -pump - γz Sz + Ω Sy,   pump = γs - γn (+ Γ/2 with radiative terms)
struct DrivenSystem {
    DampingTriple damping;
    double pump{0.0};
    double omega{0.0};

    // True when γx vanishes and ⟨Sx⟩ is conserved.
    bool coherence_locked() const;
};

DrivenSystem driven_system(const ReservoirRates& rates, double omega, PhaseChoice phase,
                           bool include_radiative = false);

std::array<double, 3> driven_rhs(const DrivenSystem& sys, const BlochVector& state);

// Long-time limit of driven_evolution from `initial`. Only initial.sx matters
// unless ⟨Sx⟩ or ⟨Sy⟩ is conserved.
BlochVector driven_steady_state(const DrivenSystem& sys, const BlochVector& initial);
BlochVector driven_steady_state(const ReservoirRates& rates, double omega, PhaseChoice phase,
                                double sx0);

// Closed-form solution; the (Sy, Sz) block uses the 2x2 exponential written in
// terms of exp((m±s)t) so the critically damped case needs no special branch.
BlochVector driven_evolution(const DrivenSystem& sys, const BlochVector& state0, double t);

struct DressedPopulations {
    double plus{0.5};   // ρ++ = (1 + 2sx)/2
    double minus{0.5};  // ρ-- = (1 - 2sx)/2
};

DressedPopulations dressed_populations(const BlochVector& state);

// ---- externally squeezed vacuum, for comparison -----------------------------

struct ExternalSqueezedRates {
    double gamma_phi{0.0};       // γ(1/2 + N - |M|)
    double gamma_phi_perp{0.0};  // γ(1/2 + N + |M|)
    double gamma_z{0.0};         // γ(2N + 1)
    double sz_steady{0.0};       // -1/(2(2N + 1)), i.e. ⟨σz⟩s = -1/(2N + 1)
};

// Throws DomainError unless N >= 0, γ >= 0 and 0 <= |M| <= sqrt(N(N+1)).
ExternalSqueezedRates external_squeezed_rates(double n_photons, double m_abs, double gamma);

BlochVector external_squeezed_decay(const BlochVector& state0, double n_photons, double m_abs,
                                    double gamma, double phi, double t);

} // namespace sps
