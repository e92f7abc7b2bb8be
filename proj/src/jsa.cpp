#include "spdckit/jsa.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spdckit/units.hpp"

namespace spdc {

double PumpSpec::omega0() const { return omega_from_wavelength(wavelength); }

void PumpSpec::validate() const {
    if (!(wavelength > 0.0)) throw std::invalid_argument("pump wavelength must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("pump sigma must be positive");
}

void FrequencyGrid::validate() const {
    for (const GridAxis* ax : {&signal, &idler}) {
        if (ax->points < 16 || ax->points % 2 != 0)
            throw std::invalid_argument("grid points must be even and >= 16");
        if (!(ax->half_span > 0.0)) throw std::invalid_argument("grid span must be positive");
        if (!(ax->center > ax->half_span))
            throw std::invalid_argument("grid reaches nonpositive frequencies");
    }
}

double JsaMatrix::squared_norm() const {
    const double measure = grid.signal.step() * grid.idler.step();
    // fixed row-major summation order keeps reruns bit-identical
    double acc = 0.0;
    for (Eigen::Index i = 0; i < amplitudes.rows(); ++i)
        for (Eigen::Index j = 0; j < amplitudes.cols(); ++j)
            acc += std::norm(amplitudes(i, j));
    return acc * measure;
}

void JsaMatrix::normalize() {
    const double n2 = squared_norm();
    if (!(n2 > 0.0)) throw std::runtime_error("cannot normalize an all-zero JSA");
    amplitudes /= std::sqrt(n2);
    normalized = true;
}

void GaussianJsaCoefficients::validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !(4.0 * a * b - c * c > 0.0))
        throw std::invalid_argument(
            "Gaussian JSA coefficients not normalizable (need a,b > 0 and 4ab > c^2)");
}

double GaussianJsaCoefficients::marginal_sigma_signal() const {
    validate();
    // intensity ~ exp(-2a ds^2 - 2b di^2 - 2c ds di); marginal variance from
    // the inverse of the quadratic form [[4a, 2c], [2c, 4b]]
    const double det = 16.0 * a * b - 4.0 * c * c;
    return std::sqrt(4.0 * b / det);
}

double GaussianJsaCoefficients::marginal_sigma_idler() const {
    validate();
    const double det = 16.0 * a * b - 4.0 * c * c;
    return std::sqrt(4.0 * a / det);
}

double pump_envelope(PumpShape shape, double sigma_p, double omega_p, double omega_s,
                     double omega_i) {
    if (!(sigma_p > 0.0)) throw std::invalid_argument("pump sigma must be positive");
    const double det = omega_s + omega_i - omega_p;
    if (shape == PumpShape::Gaussian) return std::exp(-det * det / (4.0 * sigma_p * sigma_p));
    // sech branch, intensity-FWHM matched to the Gaussian branch:
    // sech^2 drops to 1/2 at argument arccosh(sqrt(2))
    static const double x_half = std::acosh(std::sqrt(2.0));
    const double half_width = std::sqrt(2.0 * std::log(2.0)) * sigma_p;
    return 1.0 / std::cosh(det * x_half / half_width);
}

namespace {

inline double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

}  // namespace

double phasematch_sinc(const CrystalSpec& crystal, double omega_s, double omega_i) {
    const double dk = qpm_mismatch(crystal, omega_s + omega_i, omega_s, omega_i);
    return sinc(0.5 * dk * crystal.length);
}

double phasematch_gaussian(const CrystalSpec& crystal, double omega_s, double omega_i) {
    const double dk = qpm_mismatch(crystal, omega_s + omega_i, omega_s, omega_i);
    const double x = pm_gaussian_alpha * dk * crystal.length;
    return std::exp(-0.25 * x * x);
}

JsaMatrix build_jsa(const CrystalSpec& crystal, const PumpSpec& pump,
                    const FrequencyGrid& grid, PmModel pm_model) {
    crystal.validate();
    pump.validate();
    grid.validate();
    const SellmeierSet& set = crystal.sellmeier;
    // window preconditions at the grid extremes
    for (double w : {grid.signal.value(0), grid.signal.value(grid.signal.points - 1)})
        set.require_in_window(wavelength_from_omega(w));
    for (double w : {grid.idler.value(0), grid.idler.value(grid.idler.points - 1)})
        set.require_in_window(wavelength_from_omega(w));
    set.require_in_window(wavelength_from_omega(grid.signal.value(grid.signal.points - 1) +
                                                grid.idler.value(grid.idler.points - 1)));
    set.require_in_window(wavelength_from_omega(grid.signal.value(0) + grid.idler.value(0)));

    JsaMatrix out;
    out.grid = grid;
    const int ns = grid.signal.points;
    const int ni = grid.idler.points;
    out.amplitudes.resize(ns, ni);

    const double pump_fwhm = fwhm_from_sigma(pump.sigma);
    if (pump_fwhm / grid.signal.step() < 8.0 || pump_fwhm / grid.idler.step() < 8.0) {
        std::ostringstream os;
        os << "grid resolves the pump FWHM with fewer than 8 points ("
           << pump_fwhm / grid.signal.step() << " along signal)";
        out.warnings.push_back(os.str());
    }

    std::vector<double> ks(ns), ki(ni);
    for (int i = 0; i < ns; ++i) ks[i] = wavevector(crystal.signal_axis, grid.signal.value(i), set);
    for (int j = 0; j < ni; ++j) ki[j] = wavevector(crystal.idler_axis, grid.idler.value(j), set);
    const double grating =
        std::isinf(crystal.poling_period) ? 0.0 : two_pi / crystal.poling_period;
    const double omega_p0 = pump.omega0();
    const double half_len = 0.5 * crystal.length;
    const double alpha_len = pm_gaussian_alpha * crystal.length;

    for (int i = 0; i < ns; ++i) {
        const double ws = grid.signal.value(i);
        for (int j = 0; j < ni; ++j) {
            const double wi = grid.idler.value(j);
            const double kp = wavevector(crystal.pump_axis, ws + wi, set);
            const double dk = ks[i] + ki[j] - grating - kp;
            const double pm = pm_model == PmModel::Sinc
                                  ? sinc(half_len * dk)
                                  : std::exp(-0.25 * alpha_len * alpha_len * dk * dk);
            const double env = pump_envelope(pump.shape, pump.sigma, omega_p0, ws, wi);
            out.amplitudes(i, j) = std::abs(env * pm);
        }
    }
    out.normalize();
    return out;
}

GaussianJsaCoefficients gaussian_coefficients(const CrystalSpec& crystal,
                                              const PumpSpec& pump) {
    crystal.validate();
    pump.validate();
    const double wp = pump.omega0();
    const double wd = 0.5 * wp;
    const double kps = group_slowness(crystal.signal_axis, wd, crystal.sellmeier).value;
    const double kpi = group_slowness(crystal.idler_axis, wd, crystal.sellmeier).value;
    const double kpp = group_slowness(crystal.pump_axis, wp, crystal.sellmeier).value;
    const double al = pm_gaussian_alpha * crystal.length;
    const double inv_s2 = 1.0 / (pump.sigma * pump.sigma);
    GaussianJsaCoefficients g;
    g.a = 0.25 * (inv_s2 + al * al * (kpp - kps) * (kpp - kps));
    g.b = 0.25 * (inv_s2 + al * al * (kpp - kpi) * (kpp - kpi));
    g.c = 0.5 * (inv_s2 + al * al * (kpp - kps) * (kpp - kpi));
    return g;
}

double separability_residual(const CrystalSpec& crystal, const PumpSpec& pump) {
    const double wp = pump.omega0();
    const double wd = 0.5 * wp;
    const double kps = group_slowness(crystal.signal_axis, wd, crystal.sellmeier).value;
    const double kpi = group_slowness(crystal.idler_axis, wd, crystal.sellmeier).value;
    const double kpp = group_slowness(crystal.pump_axis, wp, crystal.sellmeier).value;
    const double al = pm_gaussian_alpha * crystal.length;
    return al * al * pump.sigma * pump.sigma * (kpp - kps) * (kpp - kpi) + 1.0;
}

PumpBandwidthReport optimal_pump_bandwidth(double slowness_product, double length,
                                           double lambda_p) {
    if (!(slowness_product < 0.0))
        throw std::domain_error(
            "no separable point: slowness product (k'_p-k'_s)(k'_p-k'_i) must be negative");
    PumpBandwidthReport r;
    r.sigma = 1.0 / (pm_gaussian_alpha * length * std::sqrt(-slowness_product));
    r.fwhm_duration = gaussian_pulse_fwhm_duration(r.sigma);
    r.fwhm_wavelength =
        wavelength_width_from_omega_width(fwhm_from_sigma(r.sigma), lambda_p);
    return r;
}

PumpBandwidthReport optimal_pump_bandwidth(const CrystalSpec& crystal, double lambda_p) {
    const double wp = omega_from_wavelength(lambda_p);
    const double wd = 0.5 * wp;
    const double kps = group_slowness(crystal.signal_axis, wd, crystal.sellmeier).value;
    const double kpi = group_slowness(crystal.idler_axis, wd, crystal.sellmeier).value;
    const double kpp = group_slowness(crystal.pump_axis, wp, crystal.sellmeier).value;
    return optimal_pump_bandwidth((kpp - kps) * (kpp - kpi), crystal.length, lambda_p);
}

FrequencyGrid default_grid(const CrystalSpec& crystal, const PumpSpec& pump, int points,
                           double span_multiplier) {
    const GaussianJsaCoefficients g = gaussian_coefficients(crystal, pump);
    const double sig = std::max(g.marginal_sigma_signal(), g.marginal_sigma_idler());
    const double wd = 0.5 * pump.omega0();
    FrequencyGrid grid;
    grid.signal = GridAxis{wd, span_multiplier * sig, points};
    grid.idler = GridAxis{wd, span_multiplier * sig, points};
    grid.validate();
    return grid;
}

}  // namespace spdc
