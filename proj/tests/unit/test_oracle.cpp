#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sps/errors.hpp"
#include "sps/bloch.hpp"
#include "sps/oracle.hpp"
#include "support.hpp"

using namespace sps;
using namespace sps::oracle;

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

Density random_density(std::mt19937_64& rng) {
    const double z = test::uniform(rng, -1.0, 1.0);
    const double a = test::uniform(rng, 0.0, 2.0 * kPi);
    const double r = 0.5 * std::cbrt(test::uniform(rng, 0.0, 1.0));
    const double s = std::sqrt(1.0 - z * z);
    return density_from_bloch({r * s * std::cos(a), r * s * std::sin(a), r * z});
}

Operator random_hermitian(std::mt19937_64& rng) {
    Operator h;
    const double a = test::uniform(rng, -1.0, 1.0);
    const double d = test::uniform(rng, -1.0, 1.0);
    const cd b{test::uniform(rng, -1.0, 1.0), test::uniform(rng, -1.0, 1.0)};
    h << a, b, std::conj(b), d;
    return h;
}

double max_abs(const Superop& m) { return m.cwiseAbs().maxCoeff(); }

void check_structure(const Superop& L, std::mt19937_64& rng) {
    // tr(Lρ) = 0 for every ρ: rows 0 and 3 sum to zero column-wise
    const Eigen::RowVector4cd trace_row = L.row(0) + L.row(3);
    CHECK(trace_row.cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, max_abs(L)));
    for (int i = 0; i < 5; ++i) {
        const Operator h = random_hermitian(rng);
        const Density out = unvectorize(L * vectorize(h));
        CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, max_abs(L)));
    }
}

ReservoirRates random_rates(std::mt19937_64& rng) {
    const auto u = test::uniforms(rng, {{0.0, 3.0}, {0.0, 3.0}, {0.0, 2.0}, {-kPi, kPi}});
    return reservoir_rates_with_phase(u[0], u[1], u[2], u[3]);
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("vectorization convention") {
    Density rho;
    rho << 1.0, cd(2.0, 1.0), cd(3.0, -1.0), 4.0;
    const VecState v = vectorize(rho);
    CHECK(v(0) == cd(1.0));
    CHECK(v(1) == cd(2.0, 1.0));
    CHECK(v(2) == cd(3.0, -1.0));
    CHECK(v(3) == cd(4.0));
    CHECK(unvectorize(v) == rho);

    auto rng = test::make_rng(30);
    const Operator a = random_hermitian(rng) + cd(0, 1) * random_hermitian(rng);
    const Operator b = random_hermitian(rng) + cd(0, 1) * random_hermitian(rng);
    const Density x = random_density(rng);
    CHECK((unvectorize(sandwich(a, b) * vectorize(x)) - a * x * b).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((unvectorize(left_multiplication(a) * vectorize(x)) - a * x).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((unvectorize(right_multiplication(b) * vectorize(x)) - x * b).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("operators") {
    CHECK((sigma_plus() * density_from_bloch({0.0, 0.0, -0.5}))(0, 1) == cd(1.0));
    CHECK((spin_x() - 0.5 * (sigma_plus() + sigma_minus())).cwiseAbs().maxCoeff() == 0.0);
    CHECK((spin_y() - cd(0, 0.5) * (sigma_minus() - sigma_plus())).cwiseAbs().maxCoeff() == 0.0);
    CHECK((spin_x() * spin_y() - spin_y() * spin_x() - cd(0, 1) * spin_z()).cwiseAbs().maxCoeff() < 1e-15);
    const BlochVector s{0.1, -0.2, 0.3};
    const auto back = bloch_from_density(density_from_bloch(s));
    CHECK(back.sx == doctest::Approx(0.1));
    CHECK(back.sy == doctest::Approx(-0.2));
    CHECK(back.sz == doctest::Approx(0.3));
    const auto diag = diagnose(density_from_bloch({0.0, 0.0, 0.5}));
    CHECK(diag.trace_error < 1e-15);
    CHECK(std::abs(diag.min_eigenvalue) < 1e-15);
}

TEST_CASE("trace and Hermiticity preservation") {
    auto rng = test::make_rng(31);
    for (int i = 0; i < 50; ++i) {
        const auto rates = random_rates(rng);
        check_structure(reservoir_liouvillian(rates), rng);
        const auto u = test::uniforms(rng, {{0.0, 1.0}, {0.0, 10.0}});
        check_structure(build_liouvillian(rates, u[0], u[1]), rng);
        const auto q = test::uniforms(rng, {{0.1, 2.0}, {0.0, 2.0}, {-kPi, kPi}});
        check_structure(build_qnd_liouvillian(q[0], q[1], q[2]), rng);
    }
}

TEST_CASE("spontaneous decay") {
    const double gamma = 0.7;
    const auto L = build_liouvillian(reservoir_rates(0.0, 0.0, 0.0), gamma, 0.0);
    std::vector<double> times;
    for (int k = 0; k <= 20; ++k) {
        times.push_back(0.25 * k);
    }
    const auto traj = propagate(density_from_bloch({0.0, 0.0, 0.5}), L, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(std::abs(traj.rho[k](0, 0).real() - std::exp(-gamma * times[k])) < 1e-10);
    }
    const auto ss = steady_state(L, density_from_bloch({0.2, 0.1, 0.3}));
    CHECK(ss.kernel_dimension == 1);
    CHECK(std::abs(ss.rho(1, 1) - 1.0) < 1e-12);
    CHECK(std::abs(ss.rho(0, 0)) < 1e-12);
    CHECK(slowest_decay_rate(L) == doctest::Approx(0.5 * gamma).epsilon(1e-12));
}

TEST_CASE("zero generator leaves the state fixed") {
    const Superop zero = Superop::Zero();
    const Density rho = density_from_bloch({0.1, 0.2, -0.3});
    const std::vector<double> times{0.0, 1.0, 5.0};
    const auto traj = propagate(rho, zero, times);
    for (const auto& r : traj.rho) {
        CHECK((r - rho).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("positivity along trajectories") {
    auto rng = test::make_rng(32);
    for (int i = 0; i < 20; ++i) {
        const auto rates = random_rates(rng);
        const auto u = test::uniforms(rng, {{0.0, 1.0}, {0.0, 5.0}});
        const auto L = build_liouvillian(rates, u[0], u[1]);
        std::vector<double> times;
        for (int k = 0; k <= 10; ++k) {
            times.push_back(0.3 * k);
        }
        const auto traj = propagate(random_density(rng), L, times);
        CHECK(traj.richardson_deviation < 1e-10);
        for (const auto& r : traj.rho) {
            const auto d = diagnose(r);
            CHECK(d.min_eigenvalue >= -1e-10);
            CHECK(d.trace_error < 1e-10);
            CHECK(d.hermiticity_error < 1e-10);
        }
    }
}

TEST_CASE("propagation rejects bad grids") {
    const auto L = build_liouvillian(reservoir_rates(1.0, 2.0, 0.0), 0.0, 1.0);
    const std::vector<double> decreasing{0.0, 1.0, 0.5};
    CHECK_THROWS(propagate(density_from_bloch({0, 0, -0.5}), L, decreasing));
}

TEST_CASE("degenerate kernel under coherence locking") {
    const auto rates = reservoir_rates_with_phase(1.0, 1.0, 0.5, kPi / 2);
    const auto L = build_liouvillian(rates, 0.0, 20.0);
    const Eigen::JacobiSVD<Superop> svd(L);
    const auto sv = svd.singularValues();
    CHECK(sv(2) < 1e-10);
    CHECK(sv(1) > 1e-10);
    int dim = 0;
    kernel_projector(L, &dim);
    CHECK(dim == 2);

    for (double sx0 : {-0.5, -0.3, 0.0, 0.3, 0.5}) {
        const auto ss = steady_state(L, density_from_bloch({sx0, 0.0, 0.0}));
        CHECK(ss.kernel_dimension == 2);
        CHECK(ss.residual < 1e-12);
        const auto b = bloch_from_density(ss.rho);
        CHECK(std::abs(b.sx - sx0) < 1e-12);
        CHECK(std::abs(b.sy) < 1e-12);
        CHECK(std::abs(b.sz) < 1e-12);
    }
}

TEST_CASE("inversion null vector") {
    const auto L = build_liouvillian(reservoir_rates(4.0, 1.0, 0.5), 0.0, 0.0);
    const auto ss = steady_state(L, density_from_bloch({0.0, 0.0, -0.5}));
    CHECK(ss.kernel_dimension == 1);
    CHECK(std::abs(bloch_from_density(ss.rho).sz - 0.15) < 1e-12);
}

TEST_CASE("decomposed reservoir equals the rate form") {
    for (double nbar : {0.0, 0.5}) {
        const auto rates = reservoir_rates(1.0, 4.0, nbar);
        CHECK(max_abs(build_liouvillian_decomposed(rates) - reservoir_liouvillian(rates)) < 1e-12);
    }
    auto rng = test::make_rng(33);
    for (int i = 0; i < 100; ++i) {
        const double g1 = test::uniform(rng, 0.05, 3.0);
        const double g2 = g1 * test::uniform(rng, 1.01, 5.0);
        const auto rates = reservoir_rates_with_phase(g1, g2, test::uniform(rng, 0.0, 3.0),
                                                      test::uniform(rng, -kPi, kPi));
        CHECK(max_abs(build_liouvillian_decomposed(rates) - reservoir_liouvillian(rates)) < 1e-12);
    }
    CHECK_THROWS_AS(build_liouvillian_decomposed(reservoir_rates(4.0, 1.0, 0.0)), DomainError);
    CHECK_THROWS_AS(build_liouvillian_decomposed(reservoir_rates(1.0, 1.0, 0.0)), DomainError);
}

TEST_CASE("single jump operator at zero temperature") {
    // Nb = 0 leaves ½γ D[Υ] alone. Υ is invertible on the two-level space
    // (|det Υ| = √(Ns(Ns+1))), so the steady state is mixed rather than dark.
    const auto rates = reservoir_rates_with_phase(1.0, 4.0, 0.0, 0.4);
    const auto desc = map_to_squeezing(rates);
    const auto L = reservoir_liouvillian(rates);
    const auto ss = steady_state(L, density_from_bloch({0.0, 0.0, -0.5}));
    const Operator y = squeezed_jump_operator(rates);
    CHECK(std::abs(std::abs(y.determinant()) - std::sqrt(desc.n_squeezed * (desc.n_squeezed + 1.0))) < 1e-14);
    CHECK((build_liouvillian_decomposed(rates) * vectorize(ss.rho)).norm() < 1e-12);
    CHECK((dissipator(y) * vectorize(ss.rho)).norm() < 1e-12);
    CHECK(diagnose(ss.rho).min_eigenvalue > 0.0);
    CHECK(std::abs(bloch_from_density(ss.rho).sz - free_decay_rates(rates).sz_steady) < 1e-12);
}

TEST_CASE("QND form") {
    const auto r = reservoir_rates_with_phase(1.0, 1.0, 0.0, kPi / 2);
    CHECK(max_abs(build_qnd_liouvillian(1.0, 0.0, kPi / 2) - reservoir_liouvillian(r)) < 1e-12);

    auto rng = test::make_rng(34);
    for (int i = 0; i < 100; ++i) {
        const double g0 = test::uniform(rng, 0.05, 3.0);
        const double nbar = test::uniform(rng, 0.0, 3.0);
        const double phi = test::uniform(rng, -kPi, kPi);
        const auto qnd = build_qnd_liouvillian(g0, nbar, phi);
        CHECK(max_abs(qnd - reservoir_liouvillian(reservoir_rates_with_phase(g0, g0, nbar, phi))) < 1e-12);
        const Operator s_phi = quadrature_operator(phi);
        const Superop left = left_multiplication(s_phi);
        CHECK(max_abs(qnd * left - left * qnd) < 1e-12 * std::max(1.0, max_abs(qnd)));
    }

    const double phi = 0.9;
    const auto L = build_qnd_liouvillian(0.7, 0.5, phi);
    const Operator s_phi = quadrature_operator(phi);
    for (int i = 0; i < 10; ++i) {
        const Density rho0 = random_density(rng);
        const std::vector<double> times{0.0, 0.5, 2.0, 8.0};
        const auto traj = propagate(rho0, L, times);
        const cd start = (s_phi * rho0).trace();
        for (const auto& rho : traj.rho) {
            CHECK(std::abs((s_phi * rho).trace() - start) < 1e-10);
        }
    }
}

TEST_CASE("correlation at zero delay") {
    auto rng = test::make_rng(35);
    for (int i = 0; i < 10; ++i) {
        const auto u = test::uniforms(rng, {{0.2, 2.0}, {0.2, 2.0}, {0.0, 1.0}});
        const auto rates = reservoir_rates(u[0], u[1], u[2]);
        const auto L = build_liouvillian(rates, 0.0, test::uniform(rng, 1.0, 10.0));
        const auto ss = steady_state(L, density_from_bloch({0.0, 0.0, -0.5}));
        const auto tau = default_tau_grid(L, 512);
        const auto corr = two_time_correlation(L, ss.rho, tau);
        const auto b = bloch_from_density(ss.rho);
        const cd splus = (sigma_plus() * ss.rho).trace();
        const double expected = 0.5 + b.sz - std::norm(splus);
        CHECK(std::abs(corr.values.front() - expected) < 1e-12);
        CHECK(std::abs(corr.values.back()) < 1e-8 * std::abs(corr.values.front()));
        CHECK(corr.coherent_weight == doctest::Approx(std::norm(splus)));
    }
}

TEST_CASE("ground state has no fluctuations") {
    const auto L = build_liouvillian(reservoir_rates(0.0, 0.0, 0.0), 1.0, 0.0);
    const auto ss = steady_state(L, density_from_bloch({0.0, 0.0, -0.5}));
    const auto corr = two_time_correlation(L, ss.rho, default_tau_grid(L, 256));
    for (const auto& v : corr.values) {
        CHECK(std::abs(v) < 1e-15);
    }
}

TEST_CASE("correlation requires a stationary state") {
    const auto L = build_liouvillian(reservoir_rates(1.0, 2.0, 0.0), 0.0, 1.0);
    const std::vector<double> tau{0.0, 0.1};
    CHECK_THROWS_AS(two_time_correlation(L, density_from_bloch({0.0, 0.0, 0.5}), tau), PreconditionError);
    const std::vector<double> shifted{0.1, 0.2};
    const auto ss = steady_state(L, density_from_bloch({0.0, 0.0, -0.5}));
    CHECK_THROWS_AS(two_time_correlation(L, ss.rho, shifted), PreconditionError);
}

TEST_CASE("exponential correlation gives a Lorentzian") {
    const double gamma = 0.8;
    Correlation corr;
    for (int k = 0; k < 40000; ++k) {
        const double t = 1e-3 * k;
        corr.tau.push_back(t);
        corr.values.emplace_back(0.5 * std::exp(-gamma * t));
    }
    std::vector<double> omega;
    for (int k = -50; k <= 50; ++k) {
        omega.push_back(0.1 * k);
    }
    const auto s = numeric_spectrum(corr, omega);
    for (std::size_t k = 0; k < omega.size(); ++k) {
        const double lorentz = gamma / (gamma * gamma + omega[k] * omega[k]);
        CHECK(std::abs(s.incoherent[k] - lorentz) < 1e-6);
    }
}

TEST_CASE("numeric spectrum sum rule and symmetry") {
    const auto rates = reservoir_rates_with_phase(1.0, 1.0, 0.5, kPi / 2);
    const double omega = 20.0;
    const auto L = build_liouvillian(rates, 0.0, omega);
    const auto ss = steady_state(L, density_from_bloch({0.0, 0.0, 0.0}));
    const auto tau = default_tau_grid(L);
    const auto corr = two_time_correlation(L, ss.rho, tau);
    // Nyquist band with twice the τ sample count: the trapezoid transform integrates exactly.
    const double h = tau[1] - tau[0];
    const std::size_t n = 2 * tau.size();
    std::vector<double> band;
    for (std::size_t k = 0; k < n; ++k) {
        band.push_back(-kPi / h + 2.0 * kPi / h * static_cast<double>(k) / static_cast<double>(n));
    }
    const auto wide = numeric_spectrum(corr, band);
    double integral = 0.0;
    for (double v : wide.incoherent) {
        integral += v;
    }
    integral *= (2.0 * kPi / h) / static_cast<double>(n) / (2.0 * kPi);
    const double expected = (corr.values.front() - corr.stationary).real();
    CHECK(std::abs(integral - expected) < 1e-3 * expected);

    const auto grid = default_omega_grid(omega, slowest_decay_rate(L), 2049);
    const auto s = numeric_spectrum(corr, grid);
    const std::size_t m = grid.size();
    const double peak = s.peak();
    for (std::size_t k = 0; k < m; ++k) {
        CHECK(std::abs(s.incoherent[k] - s.incoherent[m - 1 - k]) < 1e-9 * peak);
    }
}

TEST_CASE("default grids") {
    const auto L = build_liouvillian(reservoir_rates(1.0, 2.0, 0.0), 0.0, 5.0);
    const double gbar = slowest_decay_rate(L);
    const auto tau = default_tau_grid(L);
    CHECK(tau.size() == 4096);
    CHECK(tau.front() == 0.0);
    CHECK(tau.back() == doctest::Approx(20.0 / gbar));
    const auto dense = default_tau_grid(L, 4096, 1e3);
    CHECK((dense[1] - dense[0]) * 1e3 <= 0.02 + 1e-15);
    const auto w = default_omega_grid(5.0, gbar);
    CHECK(w.size() == 2048);
    CHECK(w.front() == doctest::Approx(-10.0 - 10.0 * gbar));
    CHECK(w.back() == doctest::Approx(10.0 + 10.0 * gbar));
}

}
