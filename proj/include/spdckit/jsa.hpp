#ifndef SPDCKIT_JSA_HPP
#define SPDCKIT_JSA_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "spdckit/dispersion.hpp"

namespace spdc {

/// Gaussian width of the phase-matching approximation, exp(-alpha^2 dk^2 L^2 / 4).
inline constexpr double pm_gaussian_alpha = 0.439;

enum class PumpShape { Gaussian, Sech2 };
enum class PmModel { Sinc, Gaussian };

struct PumpSpec {
    double wavelength = 0.0;    // m
    double sigma = 0.0;         // rad/s, std deviation of the pump power spectrum
    PumpShape shape = PumpShape::Gaussian;
    double pulse_energy = 0.0;  // J
    double rep_rate = 0.0;      // Hz

    double omega0() const;
    void validate() const;
};

struct GridAxis {
    double center = 0.0;     // rad/s
    double half_span = 0.0;  // rad/s
    int points = 0;

    double step() const { return 2.0 * half_span / (points - 1); }
    double value(int i) const { return center - half_span + step() * i; }
};

struct FrequencyGrid {
    GridAxis signal;
    GridAxis idler;

    void validate() const;  // points >= 16 and even, spans positive
};

/// Two-photon joint spectral amplitude sampled on a uniform grid.
/// Signal runs over rows, idler over columns. In this model the amplitude is
/// real and nonnegative (the magnitude of pump envelope times phase matching;
/// no spectral phase is carried). The complex element type is kept for the
/// delay phases applied downstream.
struct JsaMatrix {
    FrequencyGrid grid;
    Eigen::MatrixXcd amplitudes;
    bool normalized = false;
    std::vector<std::string> warnings;

    /// sum |S|^2 domega_s domega_i over the grid.
    double squared_norm() const;
    void normalize();  // scales so squared_norm() == 1
};

/// Exponent coefficients of the Gaussian-model JSA,
/// S ~ exp(-a ds^2 - b di^2 - c ds di) with ds, di the detunings in rad/s.
struct GaussianJsaCoefficients {
    double a = 0.0;  // (rad/s)^-2
    double b = 0.0;
    double c = 0.0;

    void validate() const;  // a,b > 0 and 4ab - c^2 > 0
    /// Standard deviations of the marginal intensity distributions.
    double marginal_sigma_signal() const;
    double marginal_sigma_idler() const;
};

/// Pump spectral amplitude at (omega_s, omega_i); peak value 1 on the energy
/// shell omega_s + omega_i = omega_p. The Sech2 branch shares the Gaussian
/// branch's intensity FWHM.
double pump_envelope(PumpShape shape, double sigma_p, double omega_p, double omega_s,
                     double omega_i);

/// sinc(dk L / 2), sinc(x) = sin(x)/x. Signed: sidelobes alternate.
double phasematch_sinc(const CrystalSpec& crystal, double omega_s, double omega_i);

/// exp(-alpha^2 dk^2 L^2 / 4) with alpha = 0.439.
double phasematch_gaussian(const CrystalSpec& crystal, double omega_s, double omega_i);

/// Pointwise |pump envelope x phase matching|, L2-normalized on the grid.
/// Adds a warning when fewer than 8 grid points resolve the pump FWHM.
JsaMatrix build_jsa(const CrystalSpec& crystal, const PumpSpec& pump,
                    const FrequencyGrid& grid, PmModel pm_model);

/// Gaussian-model exponent coefficients around the degenerate operating
/// point of the configured pump.
GaussianJsaCoefficients gaussian_coefficients(const CrystalSpec& crystal,
                                              const PumpSpec& pump);

/// alpha^2 L^2 sigma_p^2 (k'_p - k'_s)(k'_p - k'_i) + 1; zero at the
/// separable-Gaussian design point.
double separability_residual(const CrystalSpec& crystal, const PumpSpec& pump);

struct PumpBandwidthReport {
    double sigma = 0.0;             // rad/s
    double fwhm_duration = 0.0;     // s, transform-limited Gaussian pulse
    double fwhm_wavelength = 0.0;   // m, spectral FWHM at the pump wavelength
};

/// sigma_p = 1 / (alpha L sqrt(|product|)) for a negative slowness product,
/// from an explicitly supplied product (s^2/m^2) or from the crystal's
/// dispersion at the degenerate point of lambda_p.
PumpBandwidthReport optimal_pump_bandwidth(double slowness_product, double length,
                                           double lambda_p);
PumpBandwidthReport optimal_pump_bandwidth(const CrystalSpec& crystal, double lambda_p);

/// Grid with both axes centered on the degenerate point and half-span equal
/// to span_multiplier times the larger Gaussian-model marginal sigma.
FrequencyGrid default_grid(const CrystalSpec& crystal, const PumpSpec& pump,
                           int points = 256, double span_multiplier = 5.0);

}  // namespace spdc

#endif
