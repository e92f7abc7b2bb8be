#ifndef SPDCKIT_SPATIAL_HPP
#define SPDCKIT_SPATIAL_HPP

#include <Eigen/Dense>
#include <vector>

#include "spdckit/jsa.hpp"

namespace spdc {

struct BeamSpec {
    double waist = 0.0;       // m, at the crystal center
    double wavelength = 0.0;  // m

    void validate() const;
};

struct CollectionSpec {
    double signal_waist = 0.0;  // m
    double idler_waist = 0.0;   // m
    int transverse_points = 32; // per photon, even and >= 8

    void validate() const;
};

/// xi = L / (2 z_R) with the vacuum Rayleigh range z_R = pi w0^2 / lambda.
double focusing_parameter(const BeamSpec& beam, double crystal_length);

struct QAxis {
    double half_span = 0.0;  // 1/m
    int points = 0;

    double step() const { return 2.0 * half_span / (points - 1); }
    double value(int i) const { return -half_span + step() * i; }
};

/// Joint amplitude over (omega_s, omega_i, q_s, q_i) with one transverse
/// dimension per photon: pump Gaussian angular spectrum of waist w_p times
/// the phase-matching sinc of the longitudinal mismatch in the paraxial
/// approximation k_z = k - q^2/2k. Blocks are evaluated on demand; the grand
/// norm over all four axes is cached after the first use.
class SpatialSpectralAmplitude {
  public:
    SpatialSpectralAmplitude(CrystalSpec crystal, PumpSpec pump, BeamSpec pump_beam,
                             FrequencyGrid grid, CollectionSpec collection);

    const FrequencyGrid& grid() const { return grid_; }
    const QAxis& q_signal() const { return q_signal_; }
    const QAxis& q_idler() const { return q_idler_; }
    const CrystalSpec& crystal() const { return crystal_; }
    const PumpSpec& pump() const { return pump_; }
    const BeamSpec& pump_beam() const { return pump_beam_; }
    const CollectionSpec& collection() const { return collection_; }

    /// Amplitude block over (q_s, q_i) at grid node (i_s, i_i), normalized so
    /// the four-axis squared integral of the full tensor is 1.
    Eigen::MatrixXd block(int i_s, int i_i) const;

    /// sum of the squared raw kernel over all four axes (with measure).
    double raw_squared_norm() const;

  private:
    friend struct FiberProjection;
    Eigen::MatrixXd raw_block(int i_s, int i_i) const;

    CrystalSpec crystal_;
    PumpSpec pump_;
    BeamSpec pump_beam_;
    FrequencyGrid grid_;
    CollectionSpec collection_;
    QAxis q_signal_;
    QAxis q_idler_;
    std::vector<double> k_signal_;
    std::vector<double> k_idler_;
    mutable double norm_cache_ = -1.0;
};

SpatialSpectralAmplitude build_spatial_jsa(const CrystalSpec& crystal, const PumpSpec& pump,
                                           const BeamSpec& pump_beam,
                                           const FrequencyGrid& grid,
                                           const CollectionSpec& collection);

struct CouplingReport {
    // 2D efficiencies: squared 1D overlaps (symmetric second transverse axis)
    double pair = 0.0;
    double heralded_signal = 0.0;  // P(signal coupled | idler coupled)
    double heralded_idler = 0.0;
    double pair_1d = 0.0;
    double heralded_signal_1d = 0.0;
    double heralded_idler_1d = 0.0;
};

/// Overlap of each photon's transverse amplitude with the Gaussian
/// fiber-matched mode of its collection waist. Returns the renormalized
/// spectral JSA after the double projection and the coupling efficiencies.
/// The pair efficiency is normalized against the total generated amplitude
/// resolved on a wide internal transverse grid covering the emission cone
/// (out to its fourth transverse phase-matching zero), so it does not depend
/// on the narrower projection grid.
std::pair<JsaMatrix, CouplingReport> project_to_fiber(const SpatialSpectralAmplitude& ssa,
                                                      const CollectionSpec& collection);

/// Spectral JSA after the double fiber projection, skipping the (more
/// expensive) efficiency normalization pass.
JsaMatrix spatially_filtered_jsa(const CrystalSpec& crystal, const PumpSpec& pump,
                                 const BeamSpec& pump_beam, const FrequencyGrid& grid,
                                 const CollectionSpec& collection);

/// Purity of the signal photon's joint (omega, q) reduced state, heralded by
/// projecting the idler onto its collection mode.
double signal_spatial_spectral_purity(const SpatialSpectralAmplitude& ssa);

struct WaistScanRow {
    double waist = 0.0;                    // m, applied to both photons
    double spectral_purity = 0.0;          // Schmidt purity of the projected JSA
    double spatial_spectral_purity = 0.0;  // signal (omega, q) heralded purity
    double pair_coupling = 0.0;
    double heralded_signal = 0.0;
    double heralded_idler = 0.0;
};

std::vector<WaistScanRow> purity_vs_waist_scan(const CrystalSpec& crystal,
                                               const PumpSpec& pump,
                                               const BeamSpec& pump_beam,
                                               const FrequencyGrid& grid,
                                               const CollectionSpec& collection_template,
                                               const std::vector<double>& waists);

}  // namespace spdc

#endif
