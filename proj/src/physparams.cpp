#include "sps/physparams.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sps/errors.hpp"

namespace sps {

namespace {

constexpr double kQuadratureRelTol = 1e-10;
constexpr unsigned kQuadratureMaxDepth = 20;
constexpr double kCutoffMultiple = 8.0;

// y / tanh(y), continuous at y = 0.
double y_coth_y(double y) {
    if (std::abs(y) < 1e-6) {
        return 1.0 + y * y / 3.0;
    }
    return y / std::tanh(y);
}

} // namespace

void PhononBathSpec::validate() const {
    if (!(alpha > 0.0)) {
        throw DomainError("bath alpha must be positive");
    }
    if (!(omega_c > 0.0)) {
        throw DomainError("bath omega_c must be positive");
    }
    if (temperature && !(*temperature >= 0.0)) {
        throw DomainError("bath temperature must be non-negative");
    }
    if (nbar_override && !(*nbar_override >= 0.0)) {
        throw DomainError("bath nbar must be non-negative");
    }
    if (temperature && nbar_override) {
        throw DomainError("bath temperature and nbar override are mutually exclusive");
    }
}

void DriveConfig::validate() const {
    if (!(omega1_rabi >= 0.0) || !(omega2_rabi >= 0.0)) {
        throw DomainError("drive Rabi frequencies must be non-negative");
    }
    if (!(detuning > 0.0)) {
        throw DomainError("drive detuning must be positive");
    }
    if (!(laser_rabi >= 0.0)) {
        throw DomainError("exciting laser Rabi frequency must be non-negative");
    }
}

double DriveConfig::squeezing_phase() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double two_phi = std::fmod(phi1 + phi2, two_pi);
    if (two_phi < 0.0) {
        two_phi += two_pi;
    }
    return 0.5 * two_phi;
}

double thermal_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) {
        throw DomainError("thermal_occupation: omega must be positive");
    }
    if (!(temperature >= 0.0)) {
        throw DomainError("thermal_occupation: temperature must be non-negative");
    }
    if (temperature == 0.0) {
        return 0.0;
    }
    const double x = kHbarOverKbKelvinPerGHz * omega / temperature;
    return 1.0 / std::expm1(x);
}

double spectral_density(double omega, const PhononBathSpec& bath) {
    if (!(omega >= 0.0)) {
        throw DomainError("spectral_density: omega must be non-negative");
    }
    const double r = omega / bath.omega_c;
    return bath.alpha * omega * omega * omega * std::exp(-r * r);
}

double spectral_density_peak(const PhononBathSpec& bath) {
    return bath.omega_c * std::sqrt(1.5);
}

double band_support(double omega, const PhononBathSpec& bath) {
    const double peak = spectral_density(spectral_density_peak(bath), bath);
    return spectral_density(omega, bath) / peak;
}

double bath_occupation(double omega, const PhononBathSpec& bath) {
    if (bath.nbar_override) {
        return *bath.nbar_override;
    }
    return thermal_occupation(omega, bath.temperature.value_or(0.0));
}

DisplacementIntegral displacement_integral(const PhononBathSpec& bath) {
    bath.validate();
    const double T = bath.temperature.value_or(0.0);
    const double wc = bath.omega_c;
    const double alpha = bath.alpha;

    // J(ω)/ω² (2n̄+1) = α ω coth(ħω/2kBT) e^{-(ω/ωc)²}
    auto integrand = [=](double w) {
        const double r = w / wc;
        const double gauss = std::exp(-r * r);
        if (T == 0.0) {
            return alpha * w * gauss;
        }
        const double half_inv = 2.0 * T / kHbarOverKbKelvinPerGHz;  // ω at which ħω/2kBT = 1
        return alpha * half_inv * y_coth_y(w / half_inv) * gauss;
    };

    DisplacementIntegral out;
    double l1 = 0.0;
    out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, kCutoffMultiple * wc, kQuadratureMaxDepth, kQuadratureRelTol,
        &out.error_estimate, &l1);
    out.max_depth = kQuadratureMaxDepth;
    if (!std::isfinite(out.value) || out.error_estimate > kQuadratureRelTol * std::abs(out.value)) {
        throw NumericalError("displacement_factor: quadrature did not converge (value " +
                             std::to_string(out.value) + ", error estimate " +
                             std::to_string(out.error_estimate) + ")");
    }
    return out;
}

double displacement_factor(const PhononBathSpec& bath) {
    return std::exp(-0.5 * displacement_integral(bath).value);
}

double phonon_rate(DriveComponent which, const DriveConfig& drive, const PhononBathSpec& bath,
                   bool include_displacement) {
    if (!(drive.detuning > 0.0)) {
        throw DomainError("phonon_rate: detuning must be positive");
    }
    bath.validate();
    double rabi = which == DriveComponent::First ? drive.omega1_rabi : drive.omega2_rabi;
    if (rabi < 0.0) {
        throw DomainError("phonon_rate: Rabi frequency must be non-negative");
    }
    if (include_displacement) {
        rabi *= displacement_factor(bath);
    }
    return 2.0 * std::numbers::pi * rabi * rabi * bath.alpha * drive.detuning;
}

} // namespace sps
