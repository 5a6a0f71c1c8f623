#include "sps/spectrum.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sps/errors.hpp"

namespace sps {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    if (points < 2) {
        throw PreconditionError("grid needs at least two points");
    }
    std::vector<double> out(points);
    for (std::size_t k = 0; k < points; ++k) {
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    out.back() = hi;
    return out;
}

void fill_common_metadata(SpectrumResult& out, const AnalyticSpectrumModel& model) {
    const auto& d = model.system.damping;
    out.metadata["gamma_x"] = format_double(d.gamma_x);
    out.metadata["gamma_y"] = format_double(d.gamma_y);
    out.metadata["gamma_z"] = format_double(d.gamma_z);
    out.metadata["omega"] = format_double(model.system.omega);
    out.metadata["sx_steady"] = format_double(model.steady.sx);
    out.metadata["sy_steady"] = format_double(model.steady.sy);
    out.metadata["sz_steady"] = format_double(model.steady.sz);
}

} // namespace

cd FluctuationMoments::total() const {
    return cx - kI * cy;
}

FluctuationMoments steady_fluctuations(const BlochVector& s) {
    const cd plus{s.sx, s.sy};
    const double upper = s.sz + 0.5;
    return {0.5 * upper - s.sx * plus, 0.5 * kI * upper - s.sy * plus,
            -0.5 * plus * (1.0 + 2.0 * s.sz)};
}

AnalyticSpectrumModel analytic_spectrum_model(const ReservoirRates& rates, double omega,
                                              PhaseChoice phase, double sx0) {
    AnalyticSpectrumModel m;
    m.system = driven_system(rates, omega, phase, true);
    m.steady = driven_steady_state(m.system, BlochVector{sx0, 0.0, 0.0});
    m.moments = steady_fluctuations(m.steady);
    const auto& d = m.system.damping;
    cd central = 0.0;
    if (d.gamma_x == 0.0) {
        central += m.moments.cx;
    }
    if (omega == 0.0 && d.gamma_y == 0.0) {
        central += -kI * m.moments.cy;
    }
    m.central_delta_weight = central.real();
    return m;
}

cd AnalyticSpectrumModel::lambda(cd z) const {
    const auto& d = system.damping;
    const double w = system.omega;
    cd out = 0.0;
    if (d.gamma_x > 0.0) {
        out += moments.cx / (z + d.gamma_x);
    }
    if (w == 0.0) {
        if (d.gamma_y > 0.0) {
            out += -kI * moments.cy / (z + d.gamma_y);
        }
        return out;
    }
    const cd denom = z * z + (d.gamma_y + d.gamma_z) * z + d.gamma_y * d.gamma_z + w * w;
    out += -kI * (moments.cy * (z + d.gamma_z) - w * moments.cz) / denom;
    return out;
}

double AnalyticSpectrumModel::incoherent(double delta) const {
    return 2.0 * lambda(cd{0.0, -delta}).real();
}

double AnalyticSpectrumModel::coherent_weight() const {
    return steady.sx * steady.sx + steady.sy * steady.sy;
}

cd lambda_laplace(cd z, const ReservoirRates& rates, double omega, PhaseChoice phase, double sx0) {
    return analytic_spectrum_model(rates, omega, phase, sx0).lambda(z);
}

std::vector<double> default_spectrum_grid(double omega, std::size_t points) {
    if (!(omega > 0.0)) {
        throw DomainError("default_spectrum_grid: Rabi frequency must be positive");
    }
    return linspace(-2.0 * omega, 2.0 * omega, points);
}

SpectrumResult exact_incoherent_spectrum(const ReservoirRates& rates, double omega,
                                         PhaseChoice phase, double sx0,
                                         std::span<const double> omega_grid) {
    const auto model = analytic_spectrum_model(rates, omega, phase, sx0);
    SpectrumResult out;
    out.engine = "analytic";
    out.coherent_weight = model.coherent_weight();
    out.central_delta_weight = model.central_delta_weight;
    out.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    out.incoherent.reserve(omega_grid.size());
    for (double delta : omega_grid) {
        out.incoherent.push_back(model.incoherent(delta));
    }
    fill_common_metadata(out, model);
    return out;
}

SpectrumResult strong_field_spectrum(const ReservoirRates& rates, double omega,
                                     PhaseChoice phase, double sx0,
                                     std::span<const double> omega_grid) {
    const auto model = analytic_spectrum_model(rates, omega, phase, sx0);
    const auto& d = model.system.damping;
    const double sx = model.steady.sx;
    const double width_sum = d.gamma_y + d.gamma_z;
    const double half_sq = 0.25 * width_sum * width_sum;
    const double dispersive = omega > 0.0 ? (d.gamma_z - d.gamma_y) / (8.0 * omega) : 0.0;
    const double central_weight = 0.5 * (1.0 - 4.0 * sx * sx);

    SpectrumResult out;
    out.engine = "strong_field";
    out.coherent_weight = sx * sx;
    out.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    out.incoherent.reserve(omega_grid.size());
    if (d.gamma_x == 0.0) {
        // γ/(γ² + δ²) → π δ(δ): ½(1 - 4sx²)·π δ = 2π · ¼(1 - 4sx²) δ
        out.central_delta_weight = 0.5 * central_weight;
    }
    for (double delta : omega_grid) {
        double value = 0.0;
        if (d.gamma_x > 0.0) {
            value += central_weight * d.gamma_x / (d.gamma_x * d.gamma_x + delta * delta);
        }
        const double up = delta - omega;
        const double down = delta + omega;
        // The dispersive parts enter with opposite signs, as the residues of Λ at the
        // approximate roots require; S_in is then even in δ at ⟨Sx⟩ = 0.
        value += (0.125 * (1.0 + 2.0 * sx) * width_sum - dispersive * up) / (half_sq + up * up);
        value += (0.125 * (1.0 - 2.0 * sx) * width_sum + dispersive * down) / (half_sq + down * down);
        out.incoherent.push_back(value);
    }
    fill_common_metadata(out, model);
    if (omega < 10.0 * std::max(d.gamma_y, d.gamma_z)) {
        out.metadata["strong_field_warning"] = "Omega < 10 max(gamma_y, gamma_z)";
    }
    return out;
}

double analytic_incoherent_integral(const AnalyticSpectrumModel& model) {
    const auto& d = model.system.damping;
    const double w = model.system.omega;

    // Line centres and widths of the poles of Λ on the δ axis.
    std::vector<double> centres{0.0};
    std::vector<double> widths;
    if (d.gamma_x > 0.0) {
        widths.push_back(d.gamma_x);
    }
    const double m = 0.5 * (d.gamma_y + d.gamma_z);
    const double h = 0.5 * (d.gamma_z - d.gamma_y);
    const double q2 = w * w - h * h;
    if (q2 > 0.0) {
        centres.push_back(std::sqrt(q2));
        centres.push_back(-std::sqrt(q2));
        widths.push_back(m);
    } else {
        const double r = std::sqrt(-q2);
        widths.push_back(m + r);
        if (m - r > 0.0) {
            widths.push_back(m - r);
        }
    }
    // δ = s tan θ maps the line onto (-π/2, π/2) with a bounded integrand (S_in ~ 1/δ²).
    double scale = std::max(w, m);
    for (double g : widths) {
        scale = std::max(scale, g);
    }
    if (!(scale > 0.0)) {
        return 0.0;
    }
    std::vector<double> cuts{-0.5 * std::numbers::pi, 0.5 * std::numbers::pi};
    for (double c : centres) {
        for (double g : widths) {
            for (double k : {0.0, -1.0, 1.0, -10.0, 10.0, -100.0, 100.0}) {
                cuts.push_back(std::atan((c + k * g) / scale));
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const auto integrand = [&](double theta) {
        const double c = std::cos(theta);
        if (c <= 0.0) {
            return 0.0;
        }
        return model.incoherent(scale * std::tan(theta)) * scale / (c * c);
    };
    // Boost's error estimate accumulates a roundoff floor as it subdivides; the
    // disagreement of two Kronrod orders is used as the convergence measure.
    double value = 0.0;
    double error = 0.0;
    for (std::size_t k = 1; k < cuts.size(); ++k) {
        const double high = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            integrand, cuts[k - 1], cuts[k], 10, 1e-10);
        const double low = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, cuts[k - 1], cuts[k], 10, 1e-10);
        value += high;
        error += std::abs(high - low);
    }
    if (!(error <= 1e-9 * std::max(1.0, std::abs(value)))) {
        throw NumericalError("analytic_incoherent_integral: quadrature did not converge (estimate " +
                             format_double(value) + ", error " + format_double(error) + ")");
    }
    return value / (2.0 * std::numbers::pi);
}

SidebandResidues sideband_residues(const AnalyticSpectrumModel& model) {
    const auto& d = model.system.damping;
    const double w = model.system.omega;
    const double m = -0.5 * (d.gamma_y + d.gamma_z);
    const double half_diff = 0.5 * (d.gamma_z - d.gamma_y);
    const double q2 = w * w - half_diff * half_diff;
    if (!(q2 > 0.0)) {
        throw PreconditionError("sideband_residues: Rabi sidebands are not resolved");
    }
    const double q = std::sqrt(q2);
    SidebandResidues r;
    r.lower_pole = cd{m, q};
    r.upper_pole = cd{m, -q};
    const auto residue = [&](cd pole, cd other) {
        return -kI * (model.moments.cy * (pole + d.gamma_z) - w * model.moments.cz) / (pole - other);
    };
    r.lower_residue = residue(r.lower_pole, r.upper_pole);
    r.upper_residue = residue(r.upper_pole, r.lower_pole);
    return r;
}

double local_peak_ratio(const SpectrumResult& spectrum, double center, double half_width) {
    const auto& x = spectrum.omega_grid;
    const auto& y = spectrum.incoherent;
    const double global = spectrum.peak();
    if (!(global > 0.0)) {
        return 0.0;
    }
    std::size_t lo = x.size();
    std::size_t hi = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (std::abs(x[k] - center) <= half_width) {
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
    }
    if (lo >= hi) {
        return 0.0;
    }
    double best = 0.0;
    for (std::size_t k = lo + 1; k < hi; ++k) {
        if (y[k] > y[k - 1] && y[k] >= y[k + 1]) {
            const double left = *std::min_element(y.begin() + static_cast<long>(lo),
                                                  y.begin() + static_cast<long>(k));
            const double right = *std::min_element(y.begin() + static_cast<long>(k + 1),
                                                   y.begin() + static_cast<long>(hi + 1));
            best = std::max(best, y[k] - std::max(left, right));
        }
    }
    return best / global;
}

std::vector<double> default_sx0_axis(std::size_t points) {
    return linspace(-0.5, 0.5, points);
}

std::vector<Figure5Row> figure5_dataset(std::span<const double> sx0_axis,
                                        std::span<const double> delta_axis,
                                        const Figure5Options& options) {
    const auto rates = reservoir_rates_with_phase(options.gamma0, options.gamma0, options.nbar,
                                                  0.5 * std::numbers::pi);
    std::vector<Figure5Row> rows;
    rows.reserve(sx0_axis.size() * delta_axis.size());
    for (double sx0 : sx0_axis) {
        if (!(std::abs(sx0) <= 0.5)) {
            throw DomainError("figure5_dataset: sx0 must lie in [-1/2, 1/2]");
        }
        const auto model =
            analytic_spectrum_model(rates, options.omega, PhaseChoice::PhiHalfPi, sx0);
        const double g0 = options.gamma0;
        for (double delta : delta_axis) {
            double value = model.incoherent(delta);
            if (options.render_central_delta) {
                value += 2.0 * model.central_delta_weight * g0 / (g0 * g0 + delta * delta);
            }
            rows.push_back({sx0, delta, value});
        }
    }
    return rows;
}

double SpectrumResult::peak() const {
    if (incoherent.empty()) {
        return 0.0;
    }
    return *std::max_element(incoherent.begin(), incoherent.end());
}

double relative_sup_distance(const SpectrumResult& a, const SpectrumResult& reference) {
    if (a.omega_grid.size() != reference.omega_grid.size() ||
        a.incoherent.size() != reference.incoherent.size() ||
        a.incoherent.size() != a.omega_grid.size()) {
        throw PreconditionError("relative_sup_distance: grids differ");
    }
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < a.incoherent.size(); ++k) {
        if (a.omega_grid[k] != reference.omega_grid[k]) {
            throw PreconditionError("relative_sup_distance: grids differ");
        }
        diff = std::max(diff, std::abs(a.incoherent[k] - reference.incoherent[k]));
        scale = std::max(scale, std::abs(reference.incoherent[k]));
    }
    if (scale == 0.0) {
        return diff;
    }
    return diff / scale;
}

} // namespace sps
