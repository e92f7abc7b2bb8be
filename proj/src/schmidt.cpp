#include "spdckit/schmidt.hpp"

#include <cmath>
#include <stdexcept>

#include "spdckit/units.hpp"

namespace spdc {

SchmidtResult schmidt_decompose(const JsaMatrix& jsa) {
    if (!jsa.normalized || std::abs(jsa.squared_norm() - 1.0) > 1e-9)
        throw std::invalid_argument("schmidt_decompose needs a normalized JSA");
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(jsa.amplitudes,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    SchmidtResult res;
    const double cutoff = 1e-12 * sv(0);
    double sum_sq = 0.0;
    for (Eigen::Index n = 0; n < sv.size(); ++n) {
        if (sv(n) < cutoff) break;
        res.singular_values.push_back(sv(n));
        sum_sq += sv(n) * sv(n);
    }
    double sum_quad = 0.0;
    for (double& v : res.singular_values) {
        v /= std::sqrt(sum_sq);
        sum_quad += v * v * v * v;
    }
    res.purity = sum_quad;
    res.schmidt_number = 1.0 / sum_quad;
    const int nmodes = static_cast<int>(std::min<std::size_t>(res.singular_values.size(), 8));
    res.signal_modes = svd.matrixU().leftCols(nmodes);
    res.idler_modes = svd.matrixV().leftCols(nmodes);
    return res;
}

double purity_gaussian_analytic(const GaussianJsaCoefficients& coeffs) {
    coeffs.validate();
    return std::sqrt((4.0 * coeffs.a * coeffs.b - coeffs.c * coeffs.c) /
                     (4.0 * coeffs.a * coeffs.b));
}

double g2_zero(double purity) {
    if (!(purity > 0.0) || purity > 1.0 + 1e-12)
        throw std::domain_error("g2_zero needs a purity in (0, 1]");
    return 1.0 + purity;
}

std::vector<G2ScanPoint> g2_bandwidth_scan(const CrystalSpec& crystal,
                                           const PumpSpec& pump_template,
                                           const std::vector<double>& sigma_list,
                                           const std::optional<SpatialFilterConfig>& spatial,
                                           int grid_points, double span_multiplier) {
    if (sigma_list.empty()) throw std::invalid_argument("sigma list must not be empty");
    std::vector<G2ScanPoint> curve;
    curve.reserve(sigma_list.size());
    for (double sigma : sigma_list) {
        PumpSpec pump = pump_template;
        pump.sigma = sigma;
        const FrequencyGrid grid = default_grid(crystal, pump, grid_points, span_multiplier);
        JsaMatrix jsa;
        if (spatial) {
            jsa = spatially_filtered_jsa(crystal, pump, spatial->pump_beam, grid,
                                         spatial->collection);
        } else {
            jsa = build_jsa(crystal, pump, grid, PmModel::Sinc);
        }
        G2ScanPoint pt;
        pt.sigma = sigma;
        pt.pump_fwhm_nm =
            wavelength_width_from_omega_width(fwhm_from_sigma(sigma), pump.wavelength) * 1e9;
        pt.purity = schmidt_decompose(jsa).purity;
        pt.g2 = g2_zero(pt.purity);
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace spdc
