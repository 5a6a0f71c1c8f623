#include <doctest.h>

#include <cmath>

#include "sps/errors.hpp"
#include "sps/reservoir.hpp"
#include "support.hpp"

using namespace sps;

TEST_SUITE("reservoir") {

TEST_CASE("rate triple closed forms") {
    const auto r = reservoir_rates(1.0, 4.0, 0.0);
    CHECK(r.gamma_s == 4.0);
    CHECK(r.gamma_n == 1.0);
    CHECK(r.gamma_m == 2.0);

    const auto vacuum = reservoir_rates(0.0, 1.0, 0.0);
    CHECK(vacuum.gamma_s == 1.0);
    CHECK(vacuum.gamma_n == 0.0);
    CHECK(vacuum.gamma_m == 0.0);

    for (double nbar : {0.0, 0.5, 3.0}) {
        const auto p = reservoir_rates(1.7, 1.7, nbar);
        const double expected = (2.0 * nbar + 1.0) * 1.7;
        CHECK(p.gamma_s == doctest::Approx(expected).epsilon(1e-15));
        CHECK(p.gamma_n == doctest::Approx(expected).epsilon(1e-15));
        CHECK(p.gamma_m == doctest::Approx(expected).epsilon(1e-15));
    }

    CHECK(reservoir_rates(1.0, 2.0, 0.0, 0.4, 0.6).phi == doctest::Approx(0.5));
    CHECK_THROWS_AS(reservoir_rates(-1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(reservoir_rates(1.0, 1.0, -0.1), DomainError);
    CHECK_THROWS_AS(reservoir_rates(1.0, 1.0, 0.0, 0.0, 0.0, -1.0), DomainError);
}

TEST_CASE("ordinary and inverted mappings") {
    const auto ord = map_to_squeezing(reservoir_rates(1.0, 4.0, 0.0));
    CHECK(ord.regime == Regime::Ordinary);
    CHECK(ord.gamma_eff == doctest::Approx(6.0));
    CHECK(ord.n_photons == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(ord.m_abs == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ord.n_squeezed == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(ord.n_background == 0.0);
    CHECK(ord.quantum);
    // u = 2√(γ1γ2)/γ = 2/3, w = (γ1+γ2)/γ = 5/6; Ns = (w - 1/2)
    CHECK(ord.n_squeezed == doctest::Approx(5.0 / 6.0 - 0.5).epsilon(1e-15));

    const auto inv = map_to_squeezing(reservoir_rates(4.0, 1.0, 0.0));
    CHECK(inv.regime == Regime::Inverted);
    CHECK(inv.gamma_eff == doctest::Approx(6.0));
    CHECK(inv.n_photons == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(inv.m_abs == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("perfect regime sentinels") {
    const auto d = map_to_squeezing(reservoir_rates(2.0, 2.0, 0.5));
    CHECK(d.regime == Regime::Perfect);
    CHECK(std::isinf(d.n_photons));
    CHECK(std::isinf(d.m_abs));
    CHECK(d.n_background == 0.0);
    CHECK(d.correlation_gap == -0.75);
    CHECK(d.quantum);
    CHECK(classify_regime(1.0, 1.0 + 1e-10) == Regime::Perfect);
    CHECK(classify_regime(1.0, 1.0 + 1e-8) == Regime::Ordinary);
}

TEST_CASE("identities over random inputs") {
    auto rng = test::make_rng(10);
    for (int i = 0; i < 1000; ++i) {
        const double g1 = test::uniform(rng, 0.05, 10.0);
        const double g2 = test::uniform(rng, 0.05, 10.0);
        const double nbar = test::uniform(rng, 0.0, 5.0);
        const auto r = reservoir_rates(g1, g2, nbar);
        const double lhs = r.gamma_s * r.gamma_n - r.gamma_m * r.gamma_m;
        const double rhs = nbar * (nbar + 1.0) * (g1 - g2) * (g1 - g2);
        CHECK(test::identity_residual(lhs - rhs, {r.gamma_s * r.gamma_n, r.gamma_m * r.gamma_m, rhs}) <
              1e-12);
        CHECK(r.gamma_s >= 0.0);
        CHECK(r.gamma_n >= 0.0);
        CHECK(r.gamma_m >= 0.0);

        const auto d = map_to_squeezing(r);
        if (d.regime == Regime::Perfect) {
            continue;
        }
        const double N = d.n_photons;
        const double M = d.m_abs;
        const double gap = M * M - N * (N + 1.0);
        CHECK(test::identity_residual(gap + nbar * (nbar + 1.0),
                                      {M * M, N * (N + 1.0), nbar * (nbar + 1.0)}) < 1e-12);
        CHECK(test::rel_close(d.n_squeezed + d.n_background, N, 1e-12));
        CHECK(test::rel_close(d.n_squeezed * (d.n_squeezed + 1.0), M * M, 1e-12));
        CHECK(d.n_background >= 0.0);
        CHECK(d.n_squeezed >= 0.0);

        // γ1 ↔ γ2 maps Ordinary ↔ Inverted with identical (N, |M|)
        const auto swapped = map_to_squeezing(reservoir_rates(g2, g1, nbar));
        CHECK(swapped.regime != d.regime);
        CHECK(test::rel_close(swapped.n_photons, N, 1e-12));
        CHECK(test::rel_close(swapped.m_abs, M, 1e-12));
    }
}

TEST_CASE("excess correlation matches the closed form") {
    auto rng = test::make_rng(11);
    for (int i = 0; i < 200; ++i) {
        const double g1 = test::uniform(rng, 0.1, 1.0);
        const double g2 = test::uniform(rng, 2.0, 10.0);
        const double nbar = test::uniform(rng, 0.0, 3.0);
        const auto d = map_to_squeezing(reservoir_rates(g1, g2, nbar));
        CHECK(d.excess_correlation == doctest::Approx(d.m_abs - d.n_photons).epsilon(1e-12));
        const double printed =
            (std::sqrt(g1) - nbar * (std::sqrt(g2) - std::sqrt(g1))) / (std::sqrt(g1) + std::sqrt(g2));
        CHECK(d.excess_correlation == doctest::Approx(printed).epsilon(1e-14));
    }
}

TEST_CASE("quantum threshold") {
    CHECK(quantum_threshold(1.0, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(quantum_threshold(1.0, 9.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(quantum_threshold(4.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::isinf(quantum_threshold(2.0, 2.0)));
    CHECK_THROWS_AS(quantum_threshold(0.0, 1.0), DomainError);

    auto rng = test::make_rng(12);
    for (int i = 0; i < 100; ++i) {
        const double g1 = test::uniform(rng, 0.1, 5.0);
        const double g2 = g1 * test::uniform(rng, 1.1, 10.0);
        const double t = quantum_threshold(g1, g2);
        CHECK(map_to_squeezing(reservoir_rates(g1, g2, t * (1.0 - 1e-6))).quantum);
        CHECK_FALSE(map_to_squeezing(reservoir_rates(g1, g2, t * (1.0 + 1e-6))).quantum);
    }
}

TEST_CASE("grid axes") {
    const auto ratio = default_ratio_axis();
    const auto pts = ratio.points();
    REQUIRE(pts.size() == 201);
    CHECK(pts.front() > 1.0);
    CHECK(pts.back() == 10.0);
    const auto nbar = default_nbar_axis().points();
    CHECK(nbar.front() == 0.0);
    CHECK(nbar.back() == 3.0);
    CHECK(default_nbar_axis().spacing() == doctest::Approx(0.015));
}

TEST_CASE("figure 3 surface") {
    const GridAxis nbar_axis{0.0, 3.0, 31, true};
    const GridAxis ratio_axis{1.0, 10.0, 36, false};
    const auto surface = figure3_dataset(nbar_axis, ratio_axis);
    REQUIRE(surface.size() == 31 * 36);
    for (std::size_t j = 0; j < 36; ++j) {
        const auto& p = surface[j];
        CHECK(p.nbar == 0.0);
        const double N = 1.0 / (p.ratio - 1.0);
        CHECK(p.value == doctest::Approx(std::sqrt(1.0 + 1.0 / N)).epsilon(1e-13));
        CHECK(p.value > 1.0);
    }
    for (std::size_t i = 1; i < 31; ++i) {
        for (std::size_t j = 0; j < 36; ++j) {
            CHECK(surface[i * 36 + j].value < surface[(i - 1) * 36 + j].value);
        }
    }
    CHECK_THROWS_AS(figure3_dataset(nbar_axis, GridAxis{0.5, 2.0, 5, true}), DomainError);
}

TEST_CASE("figure 4 surface") {
    const GridAxis nbar_axis{0.0, 3.0, 61, true};
    const GridAxis ratio_axis{1.0, 10.0, 36, false};
    const auto surface = figure4_dataset(nbar_axis, ratio_axis);
    REQUIRE(surface.size() == 61 * 36);
    for (std::size_t j = 0; j < 36; ++j) {
        CHECK(surface[j].value == 0.0);
    }
    for (std::size_t i = 1; i < 61; ++i) {
        for (std::size_t j = 0; j < 36; ++j) {
            const auto& here = surface[i * 36 + j];
            const auto& before = surface[(i - 1) * 36 + j];
            if (!std::isnan(here.value) && !std::isnan(before.value)) {
                CHECK(here.value > before.value);
            }
        }
    }
    // Nb/(|M| - Ns) = 1 on n̄ = 1/(√(γ2/γ1) - 1); at ratio 4 the boundary is n̄ = 1
    const GridAxis line{0.0, 2.0, 201, true};
    const GridAxis four{3.0, 4.0, 1, false};
    const auto cut = figure4_dataset(line, four);
    for (const auto& p : cut) {
        if (std::isnan(p.value)) {
            continue;
        }
        if (p.nbar < 1.0 - 1e-12) {
            CHECK(p.value < 1.0);
        } else if (p.nbar > 1.0 + 1e-12) {
            CHECK(p.value > 1.0);
        } else {
            CHECK(p.value == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

}
