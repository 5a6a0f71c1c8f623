#include "sps/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sps/errors.hpp"

namespace sps {

namespace {

// Rates that cancel to within roundoff of their scale are set to exactly zero.
constexpr double kRateSnapRelTol = 1e-12;

double snap_rate(double rate, double scale) {
    return rate <= kRateSnapRelTol * scale ? 0.0 : rate;
}

// Solution of x' = -k x - p.
double relax_scalar(double x0, double k, double p, double t) {
    if (k > 0.0) {
        const double xss = -p / k;
        return xss + (x0 - xss) * std::exp(-k * t);
    }
    return x0 - p * t;
}

void require_time(double t) {
    if (!(t >= 0.0)) {
        throw DomainError("evolution time must be non-negative");
    }
}

} // namespace

BlochVector ground_state() {
    return {0.0, 0.0, -0.5};
}

FreeDecayRates free_decay_rates(const ReservoirRates& rates) {
    const double half_rad = 0.5 * rates.gamma_rad;
    const double sum = rates.gamma_s + rates.gamma_n;
    const double scale = half_rad + sum + 2.0 * rates.gamma_m;
    FreeDecayRates out;
    out.gamma_phi = snap_rate(half_rad + sum - 2.0 * rates.gamma_m, scale);
    out.gamma_phi_perp = half_rad + sum + 2.0 * rates.gamma_m;
    out.gamma_z = 2.0 * (sum + half_rad);
    out.sz_steady = out.gamma_z > 0.0
                        ? -(rates.gamma_s - rates.gamma_n + half_rad) / (2.0 * (sum + half_rad))
                        : 0.0;
    return out;
}

Quadratures quadrature(const BlochVector& state, double phi) {
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    return {state.sx * s + state.sy * c, state.sx * c - state.sy * s};
}

BlochVector free_evolution(const BlochVector& state0, const ReservoirRates& rates, double t) {
    require_time(t);
    const auto k = free_decay_rates(rates);
    const auto q0 = quadrature(state0, rates.phi);
    const BlochVector rotated{q0.s_phi * std::exp(-k.gamma_phi * t),
                              q0.s_phi_perp * std::exp(-k.gamma_phi_perp * t), 0.0};
    const auto back = quadrature(rotated, rates.phi);
    return {back.s_phi, back.s_phi_perp,
            k.sz_steady + (state0.sz - k.sz_steady) * std::exp(-k.gamma_z * t)};
}

double phase_value(PhaseChoice choice) {
    return choice == PhaseChoice::PhiZero ? 0.0 : 0.5 * std::numbers::pi;
}

PhaseChoice phase_choice_from(double phi, double tol) {
    constexpr double pi = std::numbers::pi;
    double reduced = std::fmod(phi, pi);
    if (reduced < 0.0) {
        reduced += pi;
    }
    if (reduced < tol || pi - reduced < tol) {
        return PhaseChoice::PhiZero;
    }
    if (std::abs(reduced - 0.5 * pi) < tol) {
        return PhaseChoice::PhiHalfPi;
    }
    throw DomainError("driven analysis supports squeezing phase 0 or pi/2 only");
}

DampingTriple damping_triple(const ReservoirRates& rates, PhaseChoice phase,
                             bool include_radiative) {
    const double rad = include_radiative ? rates.gamma_rad : 0.0;
    const double sum = rates.gamma_s + rates.gamma_n + 0.5 * rad;
    const double scale = sum + 2.0 * rates.gamma_m;
    const double enhanced = sum + 2.0 * rates.gamma_m;
    const double reduced = snap_rate(sum - 2.0 * rates.gamma_m, scale);

    DampingTriple d;
    d.sign_convention = phase;
    if (phase == PhaseChoice::PhiZero) {
        d.gamma_x = enhanced;
        d.gamma_y = reduced;
    } else {
        d.gamma_x = reduced;
        d.gamma_y = enhanced;
    }
    d.gamma_z = 2.0 * (rates.gamma_s + rates.gamma_n) + rad;
    return d;
}

bool DrivenSystem::coherence_locked() const {
    return damping.gamma_x == 0.0;
}

DrivenSystem driven_system(const ReservoirRates& rates, double omega, PhaseChoice phase,
                           bool include_radiative) {
    if (!(omega >= 0.0)) {
        throw DomainError("exciting laser Rabi frequency must be non-negative");
    }
    DrivenSystem sys;
    sys.damping = damping_triple(rates, phase, include_radiative);
    sys.pump = rates.gamma_s - rates.gamma_n + (include_radiative ? 0.5 * rates.gamma_rad : 0.0);
    sys.omega = omega;
    return sys;
}

std::array<double, 3> driven_rhs(const DrivenSystem& sys, const BlochVector& s) {
    const auto& d = sys.damping;
    return {-d.gamma_x * s.sx,
            -d.gamma_y * s.sy - sys.omega * s.sz,
            -sys.pump - d.gamma_z * s.sz + sys.omega * s.sy};
}

BlochVector driven_steady_state(const DrivenSystem& sys, const BlochVector& initial) {
    const auto& d = sys.damping;
    BlochVector out;
    out.sx = d.gamma_x > 0.0 ? 0.0 : initial.sx;
    if (sys.omega > 0.0) {
        const double det = d.gamma_y * d.gamma_z + sys.omega * sys.omega;
        out.sy = sys.pump * sys.omega / det;
        out.sz = -sys.pump * d.gamma_y / det;
    } else {
        out.sy = d.gamma_y > 0.0 ? 0.0 : initial.sy;
        out.sz = d.gamma_z > 0.0 ? -sys.pump / d.gamma_z : initial.sz;
    }
    return out;
}

BlochVector driven_steady_state(const ReservoirRates& rates, double omega, PhaseChoice phase,
                                double sx0) {
    return driven_steady_state(driven_system(rates, omega, phase), BlochVector{sx0, 0.0, 0.0});
}

BlochVector driven_evolution(const DrivenSystem& sys, const BlochVector& state0, double t) {
    require_time(t);
    const auto& d = sys.damping;
    BlochVector out;
    out.sx = state0.sx * std::exp(-d.gamma_x * t);

    if (sys.omega == 0.0) {
        out.sy = relax_scalar(state0.sy, d.gamma_y, 0.0, t);
        out.sz = relax_scalar(state0.sz, d.gamma_z, sys.pump, t);
        return out;
    }

    // A = [[-γy, -Ω], [Ω, -γz]] = m I + K with K² = s² I.
    const double m = -0.5 * (d.gamma_y + d.gamma_z);
    const double half_diff = 0.5 * (d.gamma_z - d.gamma_y);
    const double s2 = half_diff * half_diff - sys.omega * sys.omega;
    double even = 0.0;  // e^{mt} cosh(st)
    double odd = 0.0;   // e^{mt} sinh(st)/s
    if (s2 > 0.0) {
        const double s = std::sqrt(s2);
        const double em = std::exp((m - s) * t);
        odd = em * std::expm1(2.0 * s * t) / (2.0 * s);
        even = em + s * odd;
    } else if (s2 < 0.0) {
        const double w = std::sqrt(-s2);
        const double decay = std::exp(m * t);
        even = decay * std::cos(w * t);
        odd = decay * std::sin(w * t) / w;
    } else {
        even = std::exp(m * t);
        odd = t * even;
    }

    const auto ss = driven_steady_state(sys, state0);
    const double dy = state0.sy - ss.sy;
    const double dz = state0.sz - ss.sz;
    // K = [[half_diff, -Ω], [Ω, -half_diff]]
    out.sy = ss.sy + even * dy + odd * (half_diff * dy - sys.omega * dz);
    out.sz = ss.sz + even * dz + odd * (sys.omega * dy - half_diff * dz);
    return out;
}

DressedPopulations dressed_populations(const BlochVector& state) {
    return {0.5 * (1.0 + 2.0 * state.sx), 0.5 * (1.0 - 2.0 * state.sx)};
}

ExternalSqueezedRates external_squeezed_rates(double n_photons, double m_abs, double gamma) {
    if (!(n_photons >= 0.0) || !(gamma >= 0.0)) {
        throw DomainError("external squeezed field: N and gamma must be non-negative");
    }
    const double m_max = std::sqrt(n_photons * (n_photons + 1.0));
    if (!(m_abs >= 0.0) || m_abs > m_max * (1.0 + 1e-14)) {
        throw DomainError("external squeezed field: |M| must lie in [0, sqrt(N(N+1))]");
    }
    ExternalSqueezedRates r;
    // 1/2 + N - |M| = [1/4 + N(N+1) - |M|²]/(1/2 + N + |M|), no cancellation at large N
    const double deficit = std::max(0.0, n_photons * (n_photons + 1.0) - m_abs * m_abs);
    r.gamma_phi = gamma * (0.25 + deficit) / (0.5 + n_photons + m_abs);
    r.gamma_phi_perp = gamma * (0.5 + n_photons + m_abs);
    r.gamma_z = gamma * (2.0 * n_photons + 1.0);
    // ⟨σz⟩s = -1/(2N+1); Sz = σz/2 in this code
    r.sz_steady = -0.5 / (2.0 * n_photons + 1.0);
    return r;
}

BlochVector external_squeezed_decay(const BlochVector& state0, double n_photons, double m_abs,
                                    double gamma, double phi, double t) {
    require_time(t);
    const auto k = external_squeezed_rates(n_photons, m_abs, gamma);
    const auto q0 = quadrature(state0, phi);
    const BlochVector rotated{q0.s_phi * std::exp(-k.gamma_phi * t),
                              q0.s_phi_perp * std::exp(-k.gamma_phi_perp * t), 0.0};
    const auto back = quadrature(rotated, phi);
    return {back.s_phi, back.s_phi_perp,
            k.sz_steady + (state0.sz - k.sz_steady) * std::exp(-k.gamma_z * t)};
}

} // namespace sps
