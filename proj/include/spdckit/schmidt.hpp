#ifndef SPDCKIT_SCHMIDT_HPP
#define SPDCKIT_SCHMIDT_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "spdckit/spatial.hpp"

namespace spdc {

struct SchmidtResult {
    /// Nonincreasing, renormalized so the squares sum to 1. Values below
    /// 1e-12 of the largest are dropped before the moments are formed.
    std::vector<double> singular_values;
    double schmidt_number = 0.0;  // K = 1 / sum lambda^4
    double purity = 0.0;          // P = 1/K
    /// First (up to 8) Schmidt mode profiles, columns over the grid axes.
    Eigen::MatrixXcd signal_modes;
    Eigen::MatrixXcd idler_modes;
};

/// Singular-value decomposition of the amplitude matrix. The uniform-grid
/// measure is a constant Jacobian that cancels in the renormalization.
/// Requires a normalized JsaMatrix.
SchmidtResult schmidt_decompose(const JsaMatrix& jsa);

/// Closed-form purity of a Gaussian JSA exp(-a ds^2 - b di^2 - c ds di):
/// P = sqrt((4ab - c^2) / (4ab)). (Derived from the Gaussian reduced-state
/// kernel; verified against the SVD oracle in the test suite.)
double purity_gaussian_analytic(const GaussianJsaCoefficients& coeffs);

/// g2(0) = 1 + P for 0 < P <= 1.
double g2_zero(double purity);

struct SpatialFilterConfig {
    BeamSpec pump_beam;
    CollectionSpec collection;
};

struct G2ScanPoint {
    double sigma = 0.0;         // rad/s
    double pump_fwhm_nm = 0.0;  // spectral FWHM at the pump wavelength
    double purity = 0.0;
    double g2 = 0.0;
};

/// g2(0) versus pump bandwidth. For each sigma the (spatially filtered, when
/// configured) sinc-model JSA is built on a grid adapted to that bandwidth,
/// decomposed, and reported as 1 + P.
std::vector<G2ScanPoint> g2_bandwidth_scan(const CrystalSpec& crystal,
                                           const PumpSpec& pump_template,
                                           const std::vector<double>& sigma_list,
                                           const std::optional<SpatialFilterConfig>& spatial,
                                           int grid_points = 256,
                                           double span_multiplier = 5.0);

}  // namespace spdc

#endif
