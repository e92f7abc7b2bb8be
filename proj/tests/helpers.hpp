#ifndef SPDCKIT_TEST_HELPERS_HPP
#define SPDCKIT_TEST_HELPERS_HPP

#include <cmath>

#include "spdckit/jsa.hpp"
#include "spdckit/units.hpp"

namespace spdc::test {

/// Reference operating point of the 1544 nm source on the Kato-Takaoka set: X-polarized pump at
/// 772 nm, degenerate photons at 1544 nm with the signal on X and the slow
/// Z photon as idler, 3 cm crystal, self-consistent poling period.
inline CrystalSpec reference_crystal() {
    CrystalSpec c;
    c.sellmeier = builtin_sellmeier("ktp-kato-takaoka");
    c.length = 0.03;
    c.pump_axis = Axis::X;
    c.signal_axis = Axis::X;
    c.idler_axis = Axis::Z;
    c.poling_period = solve_poling_period(c.sellmeier, c.pump_axis, c.signal_axis,
                                          c.idler_axis, 772e-9, 1544e-9, 1544e-9);
    return c;
}

inline PumpSpec reference_pump(double sigma = 467e9, PumpShape shape = PumpShape::Gaussian) {
    return PumpSpec{772e-9, sigma, shape, 600e-12, 80e6};
}

/// Synthetic dispersionless medium: constant index on every axis.
inline SellmeierSet constant_index_set(double n_x, double n_y, double n_z) {
    SellmeierSet s;
    s.name = "constant-index";
    s.provenance = "synthetic test medium";
    s.axes[0].constant = n_x * n_x;
    s.axes[1].constant = n_y * n_y;
    s.axes[2].constant = n_z * n_z;
    s.window_min_m = 100e-9;
    s.window_max_m = 100e-6;
    return s;
}

/// Gaussian JSA sampled from exponent coefficients (scale-free units are
/// fine; purity is invariant under common axis rescaling). The default
/// center is small: a unit-scale span around 1e15 rad/s would be quantized
/// away by the 0.125 ulp spacing of doubles there.
inline JsaMatrix sampled_gaussian_jsa(const GaussianJsaCoefficients& g, int points = 256,
                                      double span_sigmas = 6.0, double center = 1.0e3) {
    const double span =
        span_sigmas * std::max(g.marginal_sigma_signal(), g.marginal_sigma_idler());
    JsaMatrix jsa;
    jsa.grid.signal = GridAxis{center, span, points};
    jsa.grid.idler = GridAxis{center, span, points};
    jsa.amplitudes.resize(points, points);
    for (int i = 0; i < points; ++i) {
        const double x = jsa.grid.signal.value(i) - center;
        for (int j = 0; j < points; ++j) {
            const double y = jsa.grid.idler.value(j) - center;
            jsa.amplitudes(i, j) = std::exp(-g.a * x * x - g.b * y * y - g.c * x * y);
        }
    }
    jsa.normalize();
    return jsa;
}

}  // namespace spdc::test

#endif
