#include "spdckit/dispersion.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spdckit/units.hpp"

namespace spdc {

void CrystalSpec::validate() const {
    if (!(length > 0.0)) throw std::invalid_argument("crystal length must be positive");
    if (!(poling_period > 0.0))
        throw std::invalid_argument("poling period must be positive (use infinity for bulk)");
    if (!(sellmeier.window_min_m > 0.0) || !(sellmeier.window_max_m > sellmeier.window_min_m))
        throw std::invalid_argument("crystal has no usable Sellmeier window");
}

double wavevector(Axis axis, double omega, const SellmeierSet& set) {
    if (!(omega > 0.0)) throw std::domain_error("wavevector needs omega > 0");
    const double lambda = wavelength_from_omega(omega);
    return refractive_index(axis, lambda, set) * omega / speed_of_light;
}

Slowness group_slowness(Axis axis, double omega0, const SellmeierSet& set) {
    const double h = 1e-3 * omega0;
    // the 5-point stencil probes omega0 +- 2h; require the whole neighborhood
    set.require_in_window(wavelength_from_omega(omega0 + 2.0 * h));
    set.require_in_window(wavelength_from_omega(omega0 - 2.0 * h));
    const auto k = [&](double w) { return wavevector(axis, w, set); };
    const double d = (k(omega0 - 2.0 * h) - 8.0 * k(omega0 - h) + 8.0 * k(omega0 + h) -
                      k(omega0 + 2.0 * h)) /
                     (12.0 * h);
    return Slowness{d, axis, omega0};
}

double qpm_mismatch(const CrystalSpec& crystal, double omega_p, double omega_s,
                    double omega_i) {
    const SellmeierSet& set = crystal.sellmeier;
    const double ks = wavevector(crystal.signal_axis, omega_s, set);
    const double ki = wavevector(crystal.idler_axis, omega_i, set);
    const double kp = wavevector(crystal.pump_axis, omega_p, set);
    const double grating =
        std::isinf(crystal.poling_period) ? 0.0 : two_pi / crystal.poling_period;
    return ks + ki - grating - kp;
}

double solve_poling_period(const SellmeierSet& set, Axis pump_axis, Axis signal_axis,
                           Axis idler_axis, double lambda_p, double lambda_s,
                           double lambda_i) {
    const double lhs = 1.0 / lambda_p;
    const double rhs = 1.0 / lambda_s + 1.0 / lambda_i;
    if (std::abs(lhs - rhs) > 1e-9 * lhs) {
        std::ostringstream os;
        os << "energy conservation violated: 1/lambda_p = " << lhs
           << " but 1/lambda_s + 1/lambda_i = " << rhs << " (1/m)";
        throw std::invalid_argument(os.str());
    }
    const double ks = wavevector(signal_axis, omega_from_wavelength(lambda_s), set);
    const double ki = wavevector(idler_axis, omega_from_wavelength(lambda_i), set);
    const double kp = wavevector(pump_axis, omega_from_wavelength(lambda_p), set);
    const double bulk = ks + ki - kp;
    if (!(bulk > 0.0)) {
        std::ostringstream os;
        os << "no positive poling period: bulk mismatch k_s + k_i - k_p = " << bulk
           << " 1/m must be positive for first-order QPM in this convention";
        throw std::domain_error(os.str());
    }
    return two_pi / bulk;
}

namespace {

double degenerate_mismatch(const SellmeierSet& set, Axis pump_axis, Axis signal_axis,
                           Axis idler_axis, double poling_period, double lambda_p) {
    const double wp = omega_from_wavelength(lambda_p);
    const double wd = 0.5 * wp;
    const double ks = wavevector(signal_axis, wd, set);
    const double ki = wavevector(idler_axis, wd, set);
    const double kp = wavevector(pump_axis, wp, set);
    return ks + ki - two_pi / poling_period - kp;
}

}  // namespace

double solve_degenerate_wavelength(const SellmeierSet& set, Axis pump_axis,
                                   Axis signal_axis, Axis idler_axis,
                                   double poling_period) {
    if (!(poling_period > 0.0))
        throw std::invalid_argument("solve_degenerate_wavelength needs a positive period");
    // admissible pump wavelengths: both lambda_p and 2 lambda_p inside the window
    const double lo = set.window_min_m * (1.0 + 1e-9);
    const double hi = 0.5 * set.window_max_m * (1.0 - 1e-9);
    if (!(hi > lo))
        throw std::domain_error("Sellmeier window of '" + set.name +
                                "' admits no degenerate interaction");
    const auto f = [&](double lp) {
        return degenerate_mismatch(set, pump_axis, signal_axis, idler_axis, poling_period, lp);
    };
    // scan for a sign change, then bisect; the curve is smooth and can have
    // two roots (mismatch vs pump wavelength has a single extremum)
    const int ncells = 512;
    double prev_x = lo, prev_f = f(lo);
    for (int i = 1; i <= ncells; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / ncells;
        const double fx = f(x);
        if (prev_f == 0.0) return prev_x;
        if ((prev_f < 0.0) != (fx < 0.0)) {
            double a = prev_x, b = x, fa = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fm == 0.0 || (b - a) < 1e-16 * m) return m;
                if ((fa < 0.0) != (fm < 0.0)) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            return 0.5 * (a + b);
        }
        prev_x = x;
        prev_f = fx;
    }
    std::ostringstream os;
    os << "no degenerate phase-matched pump wavelength in [" << lo * 1e9 << ", " << hi * 1e9
       << "] nm for poling period " << poling_period * 1e6 << " um (set '" << set.name << "')";
    throw std::domain_error(os.str());
}

}  // namespace spdc
