#include "sps/reservoir.hpp"

#include <algorithm>
#include <cmath>

#include "sps/errors.hpp"
#include "sps/physparams.hpp"

namespace sps {

namespace {

void check_rate_inputs(double gamma1, double gamma2, double nbar, double gamma_rad) {
    if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) {
        throw DomainError("reservoir_rates: gamma1 and gamma2 must be non-negative");
    }
    if (!(nbar >= 0.0)) {
        throw DomainError("reservoir_rates: nbar must be non-negative");
    }
    if (!(gamma_rad >= 0.0)) {
        throw DomainError("reservoir_rates: radiative rate must be non-negative");
    }
}

} // namespace

ReservoirRates reservoir_rates_with_phase(double gamma1, double gamma2, double nbar, double phi,
                                          double gamma_rad) {
    check_rate_inputs(gamma1, gamma2, nbar, gamma_rad);
    ReservoirRates r;
    r.gamma_s = gamma1 * nbar + gamma2 * (nbar + 1.0);
    r.gamma_n = gamma1 * (nbar + 1.0) + gamma2 * nbar;
    r.gamma_m = (2.0 * nbar + 1.0) * std::sqrt(gamma1 * gamma2);
    r.phi = phi;
    r.gamma_rad = gamma_rad;
    r.gamma1 = gamma1;
    r.gamma2 = gamma2;
    r.nbar = nbar;
    return r;
}

ReservoirRates reservoir_rates(double gamma1, double gamma2, double nbar, double phi1, double phi2,
                               double gamma_rad) {
    DriveConfig phases;
    phases.phi1 = phi1;
    phases.phi2 = phi2;
    return reservoir_rates_with_phase(gamma1, gamma2, nbar, phases.squeezing_phase(), gamma_rad);
}

std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::Ordinary:
        return "ordinary";
    case Regime::Inverted:
        return "inverted";
    case Regime::Perfect:
        return "perfect";
    }
    return "unknown";
}

Regime classify_regime(double gamma1, double gamma2) {
    if (std::abs(gamma1 - gamma2) <= kPerfectRegimeRelTol * std::max(gamma1, gamma2)) {
        return Regime::Perfect;
    }
    return gamma2 > gamma1 ? Regime::Ordinary : Regime::Inverted;
}

SqueezingDescriptor map_to_squeezing(const ReservoirRates& rates) {
    SqueezingDescriptor d;
    d.regime = classify_regime(rates.gamma1, rates.gamma2);
    const double nbar = rates.nbar;
    d.correlation_gap = -nbar * (nbar + 1.0);

    if (d.regime == Regime::Perfect) {
        d.gamma_eff = 0.0;
        d.n_photons = kInfinity;
        d.m_abs = kInfinity;
        d.n_squeezed = kInfinity;
        d.n_background = 0.0;
        d.excess_correlation = 0.5;
        d.quantum = true;
        return d;
    }

    // γs - γn = γ2 - γ1 exactly; use the difference of the inputs to avoid cancellation.
    const double split = std::abs(rates.gamma2 - rates.gamma1);
    const double populating = d.regime == Regime::Ordinary ? rates.gamma_n : rates.gamma_s;
    d.gamma_eff = 2.0 * split;
    d.n_photons = populating / split;
    d.m_abs = rates.gamma_m / split;

    const double m2 = d.m_abs * d.m_abs;
    d.n_squeezed = m2 / (0.5 + std::sqrt(0.25 + m2));
    // N - Ns = [N(N+1) - |M|²]/(N + Ns + 1) and N(N+1) - |M|² = n̄(n̄+1)
    d.n_background = nbar * (nbar + 1.0) / (d.n_photons + d.n_squeezed + 1.0);

    const double s1 = std::sqrt(rates.gamma1);
    const double s2 = std::sqrt(rates.gamma2);
    const double weak = d.regime == Regime::Ordinary ? s1 : s2;
    d.excess_correlation = (weak - nbar * std::abs(s2 - s1)) / (s1 + s2);
    d.quantum = d.excess_correlation > 0.0;
    return d;
}

double quantum_threshold(double gamma1, double gamma2) {
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0)) {
        throw DomainError("quantum_threshold: gamma1 and gamma2 must be positive");
    }
    if (classify_regime(gamma1, gamma2) == Regime::Perfect) {
        return kInfinity;
    }
    const double s1 = std::sqrt(gamma1);
    const double s2 = std::sqrt(gamma2);
    return gamma2 > gamma1 ? s1 / (s2 - s1) : s2 / (s1 - s2);
}

std::vector<double> GridAxis::points() const {
    std::vector<double> out;
    if (count == 0) {
        return out;
    }
    out.reserve(count);
    if (include_lower) {
        if (count == 1) {
            out.push_back(lo);
            return out;
        }
        for (std::size_t k = 0; k < count; ++k) {
            out.push_back(k + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
        }
    } else {
        for (std::size_t k = 1; k <= count; ++k) {
            out.push_back(k == count ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count));
        }
    }
    return out;
}

double GridAxis::spacing() const {
    if (include_lower) {
        return count > 1 ? (hi - lo) / static_cast<double>(count - 1) : 0.0;
    }
    return count > 0 ? (hi - lo) / static_cast<double>(count) : 0.0;
}

GridAxis default_nbar_axis() {
    return GridAxis{0.0, 3.0, 201, true};
}

GridAxis default_ratio_axis() {
    return GridAxis{1.0, 10.0, 201, false};
}

namespace {

template <class ValueFn>
std::vector<SurfacePoint> surface(const GridAxis& nbar_axis, const GridAxis& ratio_axis,
                                  ValueFn value) {
    const auto nbars = nbar_axis.points();
    const auto ratios = ratio_axis.points();
    for (double r : ratios) {
        if (!(r > 1.0)) {
            throw DomainError("figure datasets require gamma2/gamma1 > 1 on the ratio axis");
        }
    }
    std::vector<SurfacePoint> out;
    out.reserve(nbars.size() * ratios.size());
    for (double n : nbars) {
        for (double r : ratios) {
            const auto d = map_to_squeezing(reservoir_rates_with_phase(1.0, r, n, 0.0));
            out.push_back({n, r, value(d)});
        }
    }
    return out;
}

} // namespace

std::vector<SurfacePoint> figure3_dataset(const GridAxis& nbar_axis, const GridAxis& ratio_axis) {
    return surface(nbar_axis, ratio_axis,
                   [](const SqueezingDescriptor& d) { return d.m_abs / d.n_photons; });
}

std::vector<SurfacePoint> figure4_dataset(const GridAxis& nbar_axis, const GridAxis& ratio_axis) {
    return surface(nbar_axis, ratio_axis, [](const SqueezingDescriptor& d) {
        const double denom = d.m_abs - d.n_squeezed;
        return denom > 0.0 ? d.n_background / denom : std::numeric_limits<double>::quiet_NaN();
    });
}

} // namespace sps
