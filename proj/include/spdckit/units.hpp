#ifndef SPDCKIT_UNITS_HPP
#define SPDCKIT_UNITS_HPP

#include <cmath>

namespace spdc {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Angular frequency (rad/s) of a vacuum wavelength (m).
inline double omega_from_wavelength(double lambda_m) {
    return two_pi * speed_of_light / lambda_m;
}

inline double wavelength_from_omega(double omega) {
    return two_pi * speed_of_light / omega;
}

/// Gaussian FWHM <-> standard deviation, FWHM = 2 sqrt(2 ln 2) sigma.
inline double sigma_from_fwhm(double fwhm) {
    return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

inline double fwhm_from_sigma(double sigma) {
    return sigma * 2.0 * std::sqrt(2.0 * std::log(2.0));
}

/// Spectral width conversion at a carrier wavelength: |d(omega)| = 2 pi c / lambda^2 * |d(lambda)|.
inline double omega_width_from_wavelength_width(double dlambda, double lambda0) {
    return two_pi * speed_of_light * dlambda / (lambda0 * lambda0);
}

inline double wavelength_width_from_omega_width(double domega, double lambda0) {
    return domega * lambda0 * lambda0 / (two_pi * speed_of_light);
}

/// Transform-limited Gaussian pulse: time-bandwidth product dnu_FWHM * dt_FWHM = 2 ln 2 / pi.
inline double gaussian_pulse_fwhm_duration(double sigma_omega) {
    const double dnu_fwhm = fwhm_from_sigma(sigma_omega) / two_pi;
    return 2.0 * std::log(2.0) / (3.14159265358979323846 * dnu_fwhm);
}

/// Power transmission of a loss stated in dB.
inline double transmission_from_db(double loss_db) {
    return std::pow(10.0, -loss_db / 10.0);
}

}  // namespace spdc

#endif
