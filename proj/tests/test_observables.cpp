#include <doctest.h>

#include <cmath>

#include "spdckit/observables.hpp"
#include "spdckit/schmidt.hpp"
#include "spdckit/units.hpp"
#include "helpers.hpp"

using namespace spdc;
using spdc::test::reference_crystal;
using spdc::test::reference_pump;
using spdc::test::sampled_gaussian_jsa;

namespace {

/// Separable Gaussian JSA with distinct marginal widths.
JsaMatrix pure_gaussian(double sig_s, double sig_i, int points = 64, double center = 1.2e15) {
    JsaMatrix jsa;
    jsa.grid.signal = GridAxis{center, 6.0 * sig_s, points};
    jsa.grid.idler = GridAxis{center, 6.0 * sig_i, points};
    jsa.amplitudes.resize(points, points);
    for (int i = 0; i < points; ++i)
        for (int j = 0; j < points; ++j) {
            const double x = (jsa.grid.signal.value(i) - center) / (2.0 * sig_s);
            const double y = (jsa.grid.idler.value(j) - center) / (2.0 * sig_i);
            jsa.amplitudes(i, j) = std::exp(-x * x - y * y);
        }
    jsa.normalize();
    return jsa;
}

}  // namespace

TEST_CASE("reduced states") {
    SUBCASE("product JSA gives a rank-1 projector") {
        const ReducedState r = reduced_state(pure_gaussian(3e11, 2e11), Side::Signal);
        CHECK((r.rho * r.rho - r.rho).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(r.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("Tr[rho^2] equals the Schmidt purity") {
        const JsaMatrix jsa = sampled_gaussian_jsa({1.0, 1.2, 0.9}, 128);
        const ReducedState r = reduced_state(jsa, Side::Signal);
        const double tr2 = (r.rho * r.rho).trace().real();
        CHECK(tr2 == doctest::Approx(schmidt_decompose(jsa).purity).epsilon(1e-9));
    }
    SUBCASE("unnormalized input is rejected") {
        JsaMatrix jsa = pure_gaussian(3e11, 2e11);
        jsa.normalized = false;
        CHECK_THROWS_AS(reduced_state(jsa, Side::Idler), std::invalid_argument);
    }
}

namespace {

/// exp(-a x^2 - b y^2 - c xy) sampled on an existing grid
JsaMatrix gaussian_on_grid(const FrequencyGrid& grid, const GaussianJsaCoefficients& g) {
    JsaMatrix jsa;
    jsa.grid = grid;
    jsa.amplitudes.resize(grid.signal.points, grid.idler.points);
    for (int i = 0; i < grid.signal.points; ++i) {
        const double x = grid.signal.value(i) - grid.signal.center;
        for (int j = 0; j < grid.idler.points; ++j) {
            const double y = grid.idler.value(j) - grid.idler.center;
            jsa.amplitudes(i, j) = std::exp(-g.a * x * x - g.b * y * y - g.c * x * y);
        }
    }
    jsa.normalize();
    return jsa;
}

}  // namespace

TEST_CASE("hom visibility") {
    const JsaMatrix a = pure_gaussian(3e11, 2e11);
    const ReducedState rs = reduced_state(a, Side::Signal);

    SUBCASE("identical pure states interfere perfectly") {
        CHECK(hom_visibility(rs, rs) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("signal-signal visibility equals the spectral purity") {
        const JsaMatrix mixed = sampled_gaussian_jsa({1.0, 1.0, 1.2}, 128);
        const ReducedState r = reduced_state(mixed, Side::Signal);
        CHECK(hom_visibility(r, r) ==
              doctest::Approx(schmidt_decompose(mixed).purity).epsilon(1e-12));
    }
    SUBCASE("orthogonal pure states do not interfere") {
        // odd and even profiles are orthogonal
        JsaMatrix odd = pure_gaussian(3e11, 2e11);
        for (int i = 0; i < odd.grid.signal.points; ++i) {
            const double x = odd.grid.signal.value(i) - odd.grid.signal.center;
            for (int j = 0; j < odd.grid.idler.points; ++j) odd.amplitudes(i, j) *= x;
        }
        odd.normalize();
        CHECK(hom_visibility(rs, reduced_state(odd, Side::Signal)) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("the Hilbert-Schmidt identity holds exactly") {
        const JsaMatrix base = pure_gaussian(3e11, 2e11, 64);
        const double u = 1.0 / (3e11 * 3e11);  // correlated partner on the same axis
        const JsaMatrix other =
            gaussian_on_grid(base.grid, GaussianJsaCoefficients{0.4 * u, 0.5 * u, 0.45 * u});
        const ReducedState x = reduced_state(base, Side::Signal);
        const ReducedState y = reduced_state(other, Side::Signal);
        const double v = hom_visibility(x, y);
        const double hs2 = (x.rho - y.rho).squaredNorm();
        const double tr_x = (x.rho * x.rho).trace().real();
        const double tr_y = (y.rho * y.rho).trace().real();
        CHECK(v == doctest::Approx(0.5 * (tr_x + tr_y - hs2)).epsilon(1e-12));
        SUBCASE("Cauchy-Schwarz bound") {
            CHECK(v >= 0.0);
            CHECK(v <= std::sqrt(tr_x * tr_y) + 1e-12);
            CHECK(v <= 1.0 + 1e-12);
        }
        SUBCASE("symmetry") {
            CHECK(hom_visibility(y, x) == doctest::Approx(v).epsilon(1e-12));
        }
    }
    SUBCASE("grid mismatch is an error") {
        const ReducedState other = reduced_state(pure_gaussian(3e11, 2e11, 128), Side::Signal);
        CHECK_THROWS_AS(hom_visibility(rs, other), std::invalid_argument);
    }
}

TEST_CASE("hom dip") {
    const JsaMatrix sym = pure_gaussian(3e11, 3e11);

    SUBCASE("perfect bunching of identical pure states at zero delay") {
        const HomCurve curve = hom_dip(sym, sym, DipKind::SignalSignal, {0.0});
        CHECK(curve.probabilities[0] == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("dip equals 1 - V at zero delay and recovers at large delay") {
        // physical-scale correlated state on a 1544 nm axis
        const JsaMatrix base = pure_gaussian(3e11, 3e11, 128, omega_from_wavelength(1544e-9));
        const double u = 1.0 / (3e11 * 3e11);
        const JsaMatrix mixed =
            gaussian_on_grid(base.grid, GaussianJsaCoefficients{0.3 * u, 0.35 * u, 0.4 * u});
        const ReducedState rs = reduced_state(mixed, Side::Signal);
        const ReducedState ri = reduced_state(mixed, Side::Idler);
        const HomCurve curve = hom_dip(mixed, mixed, DipKind::SignalIdler, {0.0, 4e-10});
        CHECK(curve.probabilities[0] ==
              doctest::Approx(1.0 - hom_visibility(rs, ri)).epsilon(1e-9));
        CHECK(curve.probabilities[1] == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("curve is symmetric in the delay") {
        const HomCurve curve = hom_dip(sym, sym, DipKind::SignalSignal,
                                       {-3e-12, -1e-12, 1e-12, 3e-12});
        CHECK(curve.probabilities[0] == doctest::Approx(curve.probabilities[3]).epsilon(1e-12));
        CHECK(curve.probabilities[1] == doctest::Approx(curve.probabilities[2]).epsilon(1e-12));
    }
    SUBCASE("dip width matches the Gaussian coherence time") {
        // for a separable Gaussian with marginal intensity deviation s:
        // p(tau) = 1 - exp(-s^2 tau^2)
        const double s = 3e11;
        std::vector<double> taus;
        for (int k = 0; k <= 8; ++k) taus.push_back(k * 0.5e-12);
        const HomCurve curve = hom_dip(pure_gaussian(s, s, 128), pure_gaussian(s, s, 128),
                                       DipKind::SignalSignal, taus);
        for (std::size_t k = 0; k < taus.size(); ++k) {
            const double expected = 1.0 - std::exp(-s * s * taus[k] * taus[k]);
            CHECK(curve.probabilities[k] == doctest::Approx(expected).epsilon(1e-6));
        }
    }
}

TEST_CASE("simulated JSI measurement") {
    // physical-scale correlated Gaussian JSA on a 1544 nm axis
    const double u = 1.0 / (3e11 * 3e11);
    const GaussianJsaCoefficients g{0.3 * u, 0.35 * u, 0.2 * u};
    const JsaMatrix base = pure_gaussian(3e11, 3e11, 128, omega_from_wavelength(1544e-9));
    FrequencyGrid grid = base.grid;
    grid.signal.half_span = 6.0 * g.marginal_sigma_signal();
    grid.idler.half_span = 6.0 * g.marginal_sigma_idler();
    const JsaMatrix jsa = gaussian_on_grid(grid, g);

    SUBCASE("narrow filters recover the JSI on the lattice") {
        const double step_lam =
            wavelength_width_from_omega_width(jsa.grid.signal.step(), 1544e-9);
        const MeasuredJsi m = simulate_jsi_measurement(jsa, 1e-12, step_lam);
        // the measured map normalized to its peak should match the analytic
        // JSI shape at the lattice positions (bilinear sampling error only)
        const double peak = m.intensity.maxCoeff();
        double worst = 0.0;
        for (int i = 0; i < m.signal_axis.points; ++i)
            for (int j = 0; j < m.idler_axis.points; ++j) {
                const double x = m.signal_axis.value(i) - jsa.grid.signal.center;
                const double y = m.idler_axis.value(j) - jsa.grid.idler.center;
                const double ref =
                    std::exp(-2.0 * (g.a * x * x + g.b * y * y + g.c * x * y));
                if (ref > 5e-2)
                    worst = std::max(worst, std::abs(m.intensity(i, j) / peak - ref) / ref);
            }
        CHECK(worst < 1e-2);  // bilinear lattice sampling error only
    }
    SUBCASE("total intensity is preserved up to boundary truncation") {
        const MeasuredJsi m = simulate_jsi_measurement(jsa, 0.2e-9, 0.02e-9);
        CHECK(m.total() == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(m.warnings.empty());
    }
    SUBCASE("a step beyond the filter FWHM is diagnosed") {
        const MeasuredJsi m = simulate_jsi_measurement(jsa, 0.2e-9, 0.5e-9);
        REQUIRE(!m.warnings.empty());
        CHECK(m.warnings[0].find("undersamples") != std::string::npos);
    }
}

TEST_CASE("gaussian fit of a measured JSI") {
    SUBCASE("separable map fits to purity 1") {
        const JsaMatrix jsa = pure_gaussian(3e11, 2e11, 128, omega_from_wavelength(1544e-9));
        const MeasuredJsi m = simulate_jsi_measurement(jsa, 0.02e-9, 0.01e-9);
        const JsiFitResult fit = fit_jsi_gaussian(m);
        CHECK(fit.purity == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(fit.rms_residual < 1e-3);
    }
    SUBCASE("round trip recovers known coefficients") {
        const double A = 4.2e-24, B = 3.1e-24, C = 2.4e-24;  // intensity exponents
        MeasuredJsi m;
        const double center = omega_from_wavelength(1544e-9);
        const double span = 6.0 / std::sqrt(std::min(A, B));
        m.signal_axis = GridAxis{center, span, 201};
        m.idler_axis = GridAxis{center, span, 201};
        m.intensity.resize(201, 201);
        for (int i = 0; i < 201; ++i)
            for (int j = 0; j < 201; ++j) {
                const double x = m.signal_axis.value(i) - center;
                const double y = m.idler_axis.value(j) - center;
                m.intensity(i, j) = std::exp(-A * x * x - B * y * y - C * x * y);
            }
        const JsiFitResult fit = fit_jsi_gaussian(m);
        CHECK(fit.intensity_a == doctest::Approx(A).epsilon(1e-4));
        CHECK(fit.intensity_b == doctest::Approx(B).epsilon(1e-4));
        CHECK(fit.intensity_c == doctest::Approx(C).epsilon(1e-4));
        CHECK(fit.purity ==
              doctest::Approx(std::sqrt(1.0 - C * C / (4.0 * A * B))).epsilon(1e-4));
    }
    SUBCASE("filters much wider than the JSI bias the fit towards purity 1") {
        // a strongly correlated state reads as nearly pure through wide filters
        const double u = 1.0 / (3e11 * 3e11);
        const GaussianJsaCoefficients g{0.3 * u, 0.3 * u, 0.48 * u};
        const JsaMatrix base = pure_gaussian(3e11, 3e11, 192, omega_from_wavelength(1544e-9));
        FrequencyGrid grid = base.grid;
        grid.signal.half_span = 6.0 * g.marginal_sigma_signal();
        grid.idler.half_span = 6.0 * g.marginal_sigma_idler();
        const JsaMatrix correlated = gaussian_on_grid(grid, g);
        const double true_purity = schmidt_decompose(correlated).purity;
        const double marg =
            wavelength_width_from_omega_width(g.marginal_sigma_signal(), 1544e-9);
        const MeasuredJsi m = simulate_jsi_measurement(correlated, 10.0 * marg, marg);
        const JsiFitResult fit = fit_jsi_gaussian(m);
        CHECK(true_purity < 0.8);
        CHECK(fit.purity > 0.95);
        CHECK(fit.purity > true_purity);
    }
    SUBCASE("degenerate maps are rejected") {
        MeasuredJsi m;
        m.signal_axis = GridAxis{1e15, 1e12, 21};
        m.idler_axis = GridAxis{1e15, 1e12, 21};
        m.intensity = Eigen::MatrixXd::Zero(21, 21);
        m.intensity.row(10).setOnes();  // all mass on one signal row
        CHECK_THROWS_AS(fit_jsi_gaussian(m), std::invalid_argument);
    }
    SUBCASE("too few points above half maximum") {
        MeasuredJsi m;
        m.signal_axis = GridAxis{1e15, 1e12, 21};
        m.idler_axis = GridAxis{1e15, 1e12, 21};
        m.intensity.resize(21, 21);
        for (int i = 0; i < 21; ++i)
            for (int j = 0; j < 21; ++j) {
                const double x = (i - 10) / 1.2, y = (j - 10) / 1.2;
                m.intensity(i, j) = std::exp(-x * x - y * y);
            }
        CHECK_THROWS_WITH_AS(fit_jsi_gaussian(m), doctest::Contains("7x7"),
                             std::invalid_argument);
    }
}

TEST_CASE("brightness report") {
    PumpSpec pump = reference_pump();
    pump.pulse_energy = 2.5e-9;
    const LossBudget budget{{{"optics", 0.50}, {"coupling", 0.46}}};

    SUBCASE("published numbers") {
        const BrightnessReport r = brightness_report(0.01, pump, budget);
        CHECK(r.source_pairs_per_joule * 1e-6 == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(r.loss_db_per_photon == doctest::Approx(0.96).epsilon(1e-12));
        CHECK(r.fibered_pairs_per_joule * 1e-6 == doctest::Approx(2.570752).epsilon(1e-6));
        CHECK(r.heralded_singles_per_joule * 1e-6 ==
              doctest::Approx(4.0 * std::pow(10.0, -0.096)).epsilon(1e-9));
    }
    SUBCASE("600 pJ per pulse generates about 0.0025 pairs") {
        PumpSpec weak = pump;
        weak.pulse_energy = 600e-12;
        const BrightnessReport strong = brightness_report(0.01, pump, budget);
        const double pairs = strong.source_pairs_per_joule * weak.pulse_energy;
        CHECK(pairs >= 0.0024 - 1e-12);
        CHECK(pairs <= 0.0025 + 1e-12);
    }
    SUBCASE("linear in pairs per pulse, inverse in pulse energy") {
        const BrightnessReport a = brightness_report(0.01, pump, budget);
        const BrightnessReport b = brightness_report(0.03, pump, budget);
        CHECK(b.source_pairs_per_joule ==
              doctest::Approx(3.0 * a.source_pairs_per_joule).epsilon(1e-12));
        PumpSpec dense = pump;
        dense.pulse_energy = 2.0 * pump.pulse_energy;
        const BrightnessReport c = brightness_report(0.01, dense, budget);
        CHECK(c.source_pairs_per_joule ==
              doctest::Approx(0.5 * a.source_pairs_per_joule).epsilon(1e-12));
    }
    SUBCASE("negative losses are rejected") {
        CHECK_THROWS_AS(brightness_report(0.01, pump, LossBudget{{{"broken", -0.1}}}),
                        std::invalid_argument);
    }
}
