#include "sps/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sps/errors.hpp"

namespace sps::oracle {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

double inf_norm(const Superop& L) {
    return L.cwiseAbs().rowwise().sum().maxCoeff();
}

cd trace_product(const Operator& a, const Density& x) {
    return (a * x).trace();
}

} // namespace

Operator sigma_plus() {
    Operator m = Operator::Zero();
    m(0, 1) = 1.0;
    return m;
}

Operator sigma_minus() {
    Operator m = Operator::Zero();
    m(1, 0) = 1.0;
    return m;
}

Operator spin_x() {
    return 0.5 * (sigma_minus() + sigma_plus());
}

Operator spin_y() {
    return 0.5 * kI * (sigma_minus() - sigma_plus());
}

Operator spin_z() {
    Operator m = Operator::Zero();
    m(0, 0) = 0.5;
    m(1, 1) = -0.5;
    return m;
}

VecState vectorize(const Density& rho) {
    return VecState{rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1)};
}

Density unvectorize(const VecState& v) {
    Density rho;
    rho << v(0), v(1), v(2), v(3);
    return rho;
}

Superop sandwich(const Operator& a, const Operator& b) {
    // (a ⊗ bᵀ)(2i+j, 2k+l) = a(i,k) b(l,j)
    Superop s;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    s(2 * i + j, 2 * k + l) = a(i, k) * b(l, j);
    return s;
}

Superop left_multiplication(const Operator& a) {
    return sandwich(a, Operator::Identity());
}

Superop right_multiplication(const Operator& b) {
    return sandwich(Operator::Identity(), b);
}

Superop hamiltonian_part(const Operator& h) {
    return -kI * (left_multiplication(h) - right_multiplication(h));
}

Superop dissipator(const Operator& a) {
    const Operator ad = a.adjoint();
    const Operator ada = ad * a;
    return 2.0 * sandwich(a, ad) - left_multiplication(ada) - right_multiplication(ada);
}

Superop reservoir_liouvillian(const ReservoirRates& r) {
    const Operator sp = sigma_plus();
    const Operator sm = sigma_minus();
    const cd phase = std::polar(1.0, 2.0 * r.phi);
    return r.gamma_s * dissipator(sm) + r.gamma_n * dissipator(sp) -
           r.gamma_m * (2.0 * phase * sandwich(sp, sp) + 2.0 * std::conj(phase) * sandwich(sm, sm));
}

Superop build_liouvillian(const ReservoirRates& rates, double gamma_rad, double laser_rabi) {
    Superop L = reservoir_liouvillian(rates) + 0.5 * gamma_rad * dissipator(sigma_minus());
    if (laser_rabi != 0.0) {
        L += hamiltonian_part(laser_rabi * spin_x());
    }
    return L;
}

Operator squeezed_jump_operator(const ReservoirRates& rates) {
    const auto d = map_to_squeezing(rates);
    if (d.regime != Regime::Ordinary) {
        throw DomainError("squeezed-reservoir decomposition requires gamma2 > gamma1");
    }
    return std::sqrt(d.n_squeezed + 1.0) * std::polar(1.0, -rates.phi) * sigma_minus() -
           std::sqrt(d.n_squeezed) * std::polar(1.0, rates.phi) * sigma_plus();
}

Superop build_liouvillian_decomposed(const ReservoirRates& rates) {
    const Operator upsilon = squeezed_jump_operator(rates);
    const auto d = map_to_squeezing(rates);
    const double half_gamma = 0.5 * d.gamma_eff;
    return half_gamma * dissipator(upsilon) +
           half_gamma * d.n_background * (dissipator(sigma_minus()) + dissipator(sigma_plus()));
}

Operator quadrature_operator(double phi) {
    return std::sin(phi) * spin_x() + std::cos(phi) * spin_y();
}

Superop build_qnd_liouvillian(double gamma0, double nbar, double phi) {
    if (!(gamma0 >= 0.0) || !(nbar >= 0.0)) {
        throw DomainError("build_qnd_liouvillian: gamma0 and nbar must be non-negative");
    }
    const Operator s = quadrature_operator(phi);
    const Operator s2 = s * s;
    return 4.0 * (2.0 * nbar + 1.0) * gamma0 *
           (2.0 * sandwich(s, s) - left_multiplication(s2) - right_multiplication(s2));
}

Density density_from_bloch(const BlochVector& s) {
    return 0.5 * Operator::Identity() + 2.0 * (s.sx * spin_x() + s.sy * spin_y() + s.sz * spin_z());
}

BlochVector bloch_from_density(const Density& rho) {
    return {trace_product(spin_x(), rho).real(), trace_product(spin_y(), rho).real(),
            trace_product(spin_z(), rho).real()};
}

DensityDiagnostics diagnose(const Density& rho) {
    DensityDiagnostics d;
    d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    d.trace_error = std::abs(rho.trace() - 1.0);
    const Eigen::Matrix2cd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(herm, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

namespace {

std::vector<VecState> rk4_run(const VecState& x0, const Superop& L, std::span<const double> times,
                              double h_max) {
    std::vector<VecState> out;
    out.reserve(times.size());
    out.push_back(x0);
    VecState x = x0;
    double cached_h = -1.0;
    Superop step = Superop::Identity();
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double span = times[k] - times[k - 1];
        if (span > 0.0) {
            const auto n = static_cast<long>(std::ceil(span / h_max * (1.0 - 1e-12)));
            const double h = span / static_cast<double>(std::max(1L, n));
            if (std::abs(h - cached_h) > 1e-15 * h) {
                // One classical RK4 step of x' = Lx is multiplication by this polynomial in hL.
                const Superop a = h * L;
                const Superop a2 = a * a;
                const Superop a3 = a2 * a;
                step = Superop::Identity() + a + a2 / 2.0 + a3 / 6.0 + a3 * a / 24.0;
                cached_h = h;
            }
            for (long i = 0; i < std::max(1L, n); ++i) {
                x = step * x;
            }
        }
        out.push_back(x);
    }
    return out;
}

double sup_distance(const std::vector<VecState>& a, const std::vector<VecState>& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        d = std::max(d, (a[k] - b[k]).cwiseAbs().maxCoeff());
    }
    return d;
}

} // namespace

VecTrajectory propagate_vector(const VecState& x0, const Superop& L, std::span<const double> times,
                               const PropagationOptions& options) {
    if (times.empty()) {
        throw PreconditionError("propagate: empty time grid");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] >= times[k - 1])) {
            throw PreconditionError("propagate: time grid must be non-decreasing");
        }
    }

    VecTrajectory traj;
    traj.times.assign(times.begin(), times.end());
    const double norm = inf_norm(L);
    if (norm == 0.0) {
        traj.states.assign(times.size(), x0);
        return traj;
    }

    const double total = times.back() - times.front();
    double h = options.initial_step_scale / norm;
    auto coarse = rk4_run(x0, L, times, h);
    for (int halving = 0; halving < options.max_halvings; ++halving) {
        const double h_fine = 0.5 * h;
        if (total > 0.0 && h_fine < 1e-14 * total) {
            break;
        }
        auto fine = rk4_run(x0, L, times, h_fine);
        const double dev = sup_distance(coarse, fine);
        if (dev < options.richardson_tol) {
            traj.states = std::move(fine);
            traj.step = h_fine;
            traj.richardson_deviation = dev;
            return traj;
        }
        coarse = std::move(fine);
        h = h_fine;
    }
    throw NumericalError("propagate: RK4 step-halving did not reach tolerance " +
                         std::to_string(options.richardson_tol) + " (last step " +
                         std::to_string(h) + ")");
}

Trajectory propagate(const Density& rho0, const Superop& L, std::span<const double> times,
                     const PropagationOptions& options) {
    const auto vt = propagate_vector(vectorize(rho0), L, times, options);
    Trajectory traj;
    traj.times = vt.times;
    traj.step = vt.step;
    traj.richardson_deviation = vt.richardson_deviation;
    traj.rho.reserve(vt.states.size());
    const double trace0 = rho0.trace().real();
    for (const auto& v : vt.states) {
        Density rho = unvectorize(v);
        const auto diag = diagnose(rho);
        if (diag.hermiticity_error > 1e-10 || std::abs(rho.trace().real() - trace0) > 1e-10) {
            throw NumericalError("propagate: trace or Hermiticity drifted beyond 1e-10");
        }
        traj.rho.push_back(std::move(rho));
    }
    return traj;
}

Superop kernel_projector(const Superop& L, int* kernel_dimension) {
    Eigen::JacobiSVD<Superop> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector4d sv = svd.singularValues();
    const double tol = 1e-10 * std::max(1.0, sv(0));
    int k = 0;
    for (int i = 0; i < 4; ++i) {
        if (sv(i) < tol) {
            ++k;
        }
    }
    if (kernel_dimension) {
        *kernel_dimension = k;
    }
    if (k == 0) {
        return Superop::Zero();
    }
    const Eigen::MatrixXcd right = svd.matrixV().rightCols(k);
    const Eigen::MatrixXcd left = svd.matrixU().rightCols(k);
    const Eigen::MatrixXcd gram = left.adjoint() * right;
    return right * gram.inverse() * left.adjoint();
}

SteadyState steady_state(const Superop& L, const Density& initial) {
    SteadyState ss;
    Eigen::JacobiSVD<Superop> svd(L);
    ss.singular_values = svd.singularValues();
    const Superop projector = kernel_projector(L, &ss.kernel_dimension);
    if (ss.kernel_dimension == 0) {
        throw NumericalError("steady_state: Liouvillian has a trivial kernel");
    }
    const VecState v = projector * vectorize(initial);
    ss.rho = unvectorize(v);
    ss.residual = (L * v).norm();
    return ss;
}

double slowest_decay_rate(const Superop& L) {
    Eigen::ComplexEigenSolver<Superop> es(L, false);
    const double tol = 1e-10 * std::max(1.0, inf_norm(L));
    double slowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const double re = es.eigenvalues()(i).real();
        if (re < -tol) {
            slowest = std::min(slowest, -re);
        }
    }
    if (!std::isfinite(slowest)) {
        throw NumericalError("slowest_decay_rate: Liouvillian has no decaying mode");
    }
    return slowest;
}

Correlation two_time_correlation(const Superop& L, const Density& rho_ss,
                                 std::span<const double> tau_grid,
                                 const PropagationOptions& options) {
    const VecState v_ss = vectorize(rho_ss);
    const double residual = (L * v_ss).norm();
    if (residual > 1e-10 * std::max(1.0, inf_norm(L))) {
        throw PreconditionError("two_time_correlation: rho_ss is not stationary (residual " +
                                std::to_string(residual) + ")");
    }
    if (tau_grid.empty() || tau_grid.front() != 0.0) {
        throw PreconditionError("two_time_correlation: tau grid must start at 0");
    }

    const Operator sp = sigma_plus();
    const Operator sm = sigma_minus();
    const cd mean_plus = trace_product(sp, rho_ss);
    const VecState x0 = vectorize(rho_ss * sp) - mean_plus * v_ss;

    const auto traj = propagate_vector(x0, L, tau_grid, options);
    Correlation corr;
    corr.tau.assign(tau_grid.begin(), tau_grid.end());
    corr.values.reserve(traj.states.size());
    for (const auto& x : traj.states) {
        corr.values.push_back(trace_product(sm, unvectorize(x)));
    }
    corr.stationary = trace_product(sm, unvectorize(kernel_projector(L) * x0));
    corr.coherent_weight = std::norm(mean_plus);
    return corr;
}

std::vector<double> default_tau_grid(const Superop& L, std::size_t points, double omega_extent) {
    const double tau_max = 20.0 / slowest_decay_rate(L);
    if (omega_extent > 0.0) {
        const double needed = std::ceil(tau_max * omega_extent / 0.02) + 1.0;
        if (needed > 1e7) {
            throw NumericalError("default_tau_grid: decay too slow for the requested frequency range");
        }
        points = std::max(points, static_cast<std::size_t>(needed));
    }
    if (points < 2) {
        throw PreconditionError("default_tau_grid: need at least two points");
    }
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = tau_max * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return grid;
}

std::vector<double> default_omega_grid(double laser_rabi, double gamma_bar, std::size_t points) {
    const double half = 2.0 * laser_rabi + 10.0 * gamma_bar;
    std::vector<double> grid(points);
    for (std::size_t k = 0; k < points; ++k) {
        grid[k] = -half + 2.0 * half * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    return grid;
}

SpectrumResult numeric_spectrum(const Correlation& corr, std::span<const double> omega_grid) {
    const std::size_t n = corr.tau.size();
    if (n < 2 || corr.values.size() != n) {
        throw PreconditionError("numeric_spectrum: correlation needs at least two samples");
    }
    std::vector<double> weight(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double left = k > 0 ? corr.tau[k] - corr.tau[k - 1] : 0.0;
        const double right = k + 1 < n ? corr.tau[k + 1] - corr.tau[k] : 0.0;
        weight[k] = 0.5 * (left + right);
    }
    std::vector<cd> decaying(n);
    for (std::size_t k = 0; k < n; ++k) {
        decaying[k] = corr.values[k] - corr.stationary;
    }

    SpectrumResult out;
    out.engine = "numeric";
    out.coherent_weight = corr.coherent_weight;
    out.central_delta_weight = corr.stationary.real();
    out.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    out.incoherent.resize(omega_grid.size());
    for (std::size_t j = 0; j < omega_grid.size(); ++j) {
        cd acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += weight[k] * std::polar(1.0, omega_grid[j] * corr.tau[k]) * decaying[k];
        }
        out.incoherent[j] = 2.0 * acc.real();
    }

    const double head = std::abs(decaying.front());
    const double tail = std::abs(decaying.back());
    out.metadata["tau_max"] = std::to_string(corr.tau.back());
    out.metadata["tau_points"] = std::to_string(n);
    if (head > 0.0 && tail >= 1e-8 * head) {
        out.metadata["truncation_warning"] =
            "|C(tau_max)|/|C(0)| = " + std::to_string(tail / head);
    }
    return out;
}

NumericFluorescence numeric_fluorescence(const ReservoirRates& rates, double laser_rabi, double sx0,
                                         std::span<const double> omega_grid,
                                         const PropagationOptions& options) {
    const Superop L = build_liouvillian(rates, rates.gamma_rad, laser_rabi);
    NumericFluorescence out;
    out.steady = steady_state(L, density_from_bloch({sx0, 0.0, 0.0}));
    double extent = 0.0;
    for (double w : omega_grid) {
        extent = std::max(extent, std::abs(w));
    }
    const auto tau = default_tau_grid(L, 4096, extent);
    out.correlation = two_time_correlation(L, out.steady.rho, tau, options);
    out.spectrum = numeric_spectrum(out.correlation, omega_grid);
    return out;
}

} // namespace sps::oracle
