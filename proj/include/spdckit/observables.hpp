#ifndef SPDCKIT_OBSERVABLES_HPP
#define SPDCKIT_OBSERVABLES_HPP

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "spdckit/jsa.hpp"

namespace spdc {

enum class Side { Signal, Idler };
enum class DipKind { SignalSignal, SignalIdler };

/// Single-photon spectral density matrix on one grid axis, unit trace.
struct ReducedState {
    GridAxis axis;
    Eigen::MatrixXcd rho;
};

/// rho_s = S S^dagger (Signal) or rho_i = S^T S^* (Idler), trace-normalized.
ReducedState reduced_state(const JsaMatrix& jsa, Side side);

/// V = Tr[rho_a rho_b]; symmetric, real for Hermitian inputs.
double hom_visibility(const ReducedState& a, const ReducedState& b);

struct HomCurve {
    std::vector<double> delays;         // s
    std::vector<double> probabilities;  // far-delay baseline 1
};

/// Coincidence probability p(tau) = 1 - Re Tr[rho_a D(tau) rho_b D(-tau)]
/// with D(tau) the diagonal delay phase exp(i omega tau) on the common grid;
/// p(0) = 1 - V and p -> 1 at large delay.
HomCurve hom_dip(const JsaMatrix& jsa_a, const JsaMatrix& jsa_b, DipKind kind,
                 const std::vector<double>& delays);

/// Coincidence map of a two-filter JSI measurement: the JSI convolved with
/// both filters' Gaussian intensity responses, sampled on the filter-position
/// lattice (uniform in angular frequency).
struct MeasuredJsi {
    GridAxis signal_axis;
    GridAxis idler_axis;
    Eigen::MatrixXd intensity;
    std::vector<std::string> warnings;

    double total() const;  // sum * lattice measure
};

/// filter_fwhm and step are wavelengths (m), converted at each axis center.
MeasuredJsi simulate_jsi_measurement(const JsaMatrix& jsa, double filter_fwhm, double step);

struct JsiFitResult {
    double intensity_a = 0.0;  // exponents of exp(-A ds^2 - B di^2 - C ds di)
    double intensity_b = 0.0;
    double intensity_c = 0.0;
    GaussianJsaCoefficients amplitude;  // (A, B, C) / 2
    double purity = 0.0;
    double rms_residual = 0.0;  // rms of (map - fit), relative to the map peak
};

/// Two-dimensional Gaussian fit of a measured JSI by moment matching: the
/// fitted exponents reproduce the map's centroid and covariance exactly (the
/// Gaussian-family maximum-likelihood fit for a density). Exact on Gaussian
/// maps. Requires at least 7x7 lattice points above half maximum; throws on
/// degenerate (rank-deficient) data.
JsiFitResult fit_jsi_gaussian(const MeasuredJsi& map);

struct LossBudget {
    std::vector<std::pair<std::string, double>> entries;  // label, dB per photon

    double total_db() const;
    void validate() const;  // losses >= 0
};

struct BrightnessReport {
    double pairs_per_pulse = 0.0;
    double pulse_energy = 0.0;          // J
    double source_pairs_per_joule = 0.0;
    double fibered_pairs_per_joule = 0.0;   // per-photon loss applied to both photons
    double heralded_singles_per_joule = 0.0;  // one-sided loss
    double loss_db_per_photon = 0.0;
    double pair_transmission = 0.0;
    double single_transmission = 0.0;
};

BrightnessReport brightness_report(double pairs_per_pulse, const PumpSpec& pump,
                                   const LossBudget& budget);

}  // namespace spdc

#endif
