// oracle.hpp: Brute-force two-level Lindblad reference: superoperators,
// fixed-step propagation, regression-theorem correlations and numerical spectra.
//
// Basis order is {|e⟩, |g⟩}. Density matrices are vectorized row-major,
//   vec(ρ) = (ρ_ee, ρ_eg, ρ_ge, ρ_gg),
// so that vec(AρB) = (A ⊗ Bᵀ) vec(ρ). Every superoperator here uses this order.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sps/bloch.hpp"
#include "sps/reservoir.hpp"
#include "sps/spectrum_result.hpp"

namespace sps::oracle {

using Operator = Eigen::Matrix2cd;
using Density = Eigen::Matrix2cd;
using Superop = Eigen::Matrix4cd;
using VecState = Eigen::Vector4cd;

Operator sigma_plus();   // |e⟩⟨g|
Operator sigma_minus();  // |g⟩⟨e|
Operator spin_x();
Operator spin_y();
Operator spin_z();

VecState vectorize(const Density& rho);
Density unvectorize(const VecState& v);

Superop sandwich(const Operator& a, const Operator& b);  // ρ → aρb
Superop left_multiplication(const Operator& a);          // ρ → aρ
Superop right_multiplication(const Operator& b);         // ρ → ρb
Superop hamiltonian_part(const Operator& h);             // ρ → -i[h, ρ]
Superop dissipator(const Operator& a);                   // ρ → 2aρa† - a†aρ - ρa†a

// Phonon-mediated reservoir term alone (squeezing phase from rates.phi).
Superop reservoir_liouvillian(const ReservoirRates& rates);

// -i[Ω Sx, ·] + ½Γ D[S⁻] + reservoir term; pass laser_rabi = 0 for the free dot.
Superop build_liouvillian(const ReservoirRates& rates, double gamma_rad, double laser_rabi);

// Reservoir term rebuilt as ½γ D[Υ] + ½γNb D[S⁻] + ½γNb D[S⁺],
// Υ = √(Ns+1) S⁻e^{-iφ} - √Ns S⁺e^{iφ}. Throws DomainError unless γ2 > γ1.
Superop build_liouvillian_decomposed(const ReservoirRates& rates);

// Jump operator Υ used by build_liouvillian_decomposed.
Operator squeezed_jump_operator(const ReservoirRates& rates);

// 4(2n̄+1)γ0 (2SφρSφ - Sφ²ρ - ρSφ²), Sφ = Sx sinφ + Sy cosφ.
Superop build_qnd_liouvillian(double gamma0, double nbar, double phi);
Operator quadrature_operator(double phi);

Density density_from_bloch(const BlochVector& s);
BlochVector bloch_from_density(const Density& rho);

struct DensityDiagnostics {
    double hermiticity_error{0.0};
    double trace_error{0.0};
    double min_eigenvalue{0.0};
};
DensityDiagnostics diagnose(const Density& rho);

// ---- propagation -------------------------------------------------------------

struct PropagationOptions {
    double richardson_tol{1e-10};  // max |x_h - x_{h/2}| over all samples
    double initial_step_scale{0.05};  // first step is this / ‖L‖∞
    int max_halvings{14};
};

struct VecTrajectory {
    std::vector<double> times;
    std::vector<VecState> states;
    double step{0.0};                  // largest RK4 step used
    double richardson_deviation{0.0};  // sup difference against half the step
};

// Classic RK4 with constant L, step halved until the Richardson check passes.
// Throws NumericalError when the step underflows or the halving budget runs out.
VecTrajectory propagate_vector(const VecState& x0, const Superop& L, std::span<const double> times,
                               const PropagationOptions& options = {});

struct Trajectory {
    std::vector<double> times;
    std::vector<Density> rho;
    double step{0.0};
    double richardson_deviation{0.0};
};

// As propagate_vector, plus trace/Hermiticity checks (1e-10) at every sample.
Trajectory propagate(const Density& rho0, const Superop& L, std::span<const double> times,
                     const PropagationOptions& options = {});

// ---- stationary states -------------------------------------------------------

struct SteadyState {
    Density rho;
    int kernel_dimension{0};
    Eigen::Vector4d singular_values;  // descending
    double residual{0.0};             // ‖L vec(ρ)‖
};

// Spectral projector onto ker L (zero eigenvalue assumed semisimple).
Superop kernel_projector(const Superop& L, int* kernel_dimension = nullptr);

// Long-time limit of exp(Lt) applied to `initial`; unique when ker L is one-dimensional.
SteadyState steady_state(const Superop& L, const Density& initial);

// Smallest decay rate min{-Re λ : Re λ < 0} over the spectrum of L.
double slowest_decay_rate(const Superop& L);

// ---- two-time correlations and spectra -------------------------------------

struct Correlation {
    std::vector<double> tau;
    std::vector<std::complex<double>> values;  // ⟨δS⁺(0) δS⁻(τ)⟩
    std::complex<double> stationary{0.0};      // τ → ∞ limit (non-zero only with a degenerate kernel)
    double coherent_weight{0.0};               // |⟨S⁺⟩s|²
};

// Regression theorem: X(0) = ρss S⁺ - ⟨S⁺⟩ρss evolved under L, C(τ) = tr(S⁻ X(τ)).
// Throws PreconditionError when ρss is not stationary.
Correlation two_time_correlation(const Superop& L, const Density& rho_ss,
                                 std::span<const double> tau_grid,
                                 const PropagationOptions& options = {});

// τ ∈ [0, 20/γ̄] with γ̄ = slowest_decay_rate(L); at least `points` samples, and
// enough that the spacing h obeys h·omega_extent <= 0.02 when omega_extent > 0.
std::vector<double> default_tau_grid(const Superop& L, std::size_t points = 4096,
                                     double omega_extent = 0.0);

// ω - ω0 ∈ [-2Ω - 10γ̄, 2Ω + 10γ̄]; 2048 points.
std::vector<double> default_omega_grid(double laser_rabi, double gamma_bar,
                                       std::size_t points = 2048);

// S_in(ω) = 2 Re ∫ dτ e^{i(ω-ω0)τ} [C(τ) - C(∞)] by the trapezoid rule on the τ grid.
// Sets metadata "truncation_warning" when |C(τmax) - C(∞)| >= 1e-8 |C(0)|.
SpectrumResult numeric_spectrum(const Correlation& corr, std::span<const double> omega_grid);

// Full numeric pipeline for the driven dot starting from ⟨Sx(0)⟩ = sx0 (Sy = Sz = 0).
struct NumericFluorescence {
    SteadyState steady;
    Correlation correlation;
    SpectrumResult spectrum;
};
NumericFluorescence numeric_fluorescence(const ReservoirRates& rates, double laser_rabi, double sx0,
                                         std::span<const double> omega_grid,
                                         const PropagationOptions& options = {});

} // namespace sps::oracle
