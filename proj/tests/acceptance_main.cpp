// Acceptance checks for the shipped design values and reproduction targets.
// Prints one PASS/FAIL line per check; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spdckit/observables.hpp"
#include "spdckit/schmidt.hpp"
#include "spdckit/studies.hpp"
#include "spdckit/units.hpp"

using namespace spdc;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s  (%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

CrystalSpec reference_crystal() {
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

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";
    const fs::path work = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "spdckit_acc";
    fs::remove_all(work);
    fs::create_directories(work);

    // 1. QPM design on the flux-grown set
    {
        const auto t0 = std::chrono::steady_clock::now();
        const SellmeierSet& flux = builtin_sellmeier("ktp-fluxgrown");
        const double period =
            solve_poling_period(flux, Axis::X, Axis::Z, Axis::X, 772e-9, 1544e-9, 1544e-9);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        check("1. poling period 47.8 um +- 5% (ktp-fluxgrown, X->Z+X)",
              in_band(period * 1e6, 47.8 * 0.95, 47.8 * 1.05) && ms < 1000.0,
              "got " + fmt(period * 1e6) + " um in " + fmt(ms) + " ms");
    }

    // 2. slowness product at the operating point (ktp-kato-takaoka)
    {
        const SellmeierSet& kato = builtin_sellmeier("ktp-kato-takaoka");
        const double wp = omega_from_wavelength(772e-9);
        const double kps = group_slowness(Axis::X, 0.5 * wp, kato).value;
        const double kpp = group_slowness(Axis::X, wp, kato).value;
        const double kpi = group_slowness(Axis::Z, 0.5 * wp, kato).value;
        const double product = (kpp - kps) * (kpp - kpi);
        check("2. slowness product 2.63e-2 +- 10%, negative, k'_s < k'_p < k'_i",
              product < 0.0 && in_band(std::abs(product) * 1e18, 2.63e-2 * 0.9, 2.63e-2 * 1.1) &&
                  kps < kpp && kpp < kpi,
              "got " + fmt(product * 1e18) + " m^-1 GHz^-1");
    }

    // 3. optimal pump bandwidth from the published product
    {
        const auto r = optimal_pump_bandwidth(-2.63e-20, 0.03, 772e-9);
        check("3a. optimal sigma 467e9 rad/s +- 3%",
              in_band(r.sigma, 467e9 * 0.97, 467e9 * 1.03), "got " + fmt(r.sigma));
        check("3b. pulse FWHM 2.6 +- 0.2 ps", in_band(r.fwhm_duration * 1e12, 2.4, 2.8),
              "got " + fmt(r.fwhm_duration * 1e12) + " ps");
        check("3c. spectral FWHM 0.33 nm +- 10%",
              in_band(r.fwhm_wavelength * 1e9, 0.33 * 0.9, 0.33 * 1.1),
              "got " + fmt(r.fwhm_wavelength * 1e9) + " nm");
    }

    const CrystalSpec crystal = reference_crystal();
    const BeamSpec pump_beam{296e-6, 772e-9};
    const CollectionSpec collection{187e-6, 187e-6, 32};
    const PumpSpec pump{772e-9, 467e9, PumpShape::Gaussian, 600e-12, 80e6};

    // 4. g2-vs-bandwidth scan: 21 points, 256^2 grid, spatially filtered
    {
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<double> sigmas;
        for (int i = 0; i < 21; ++i) {
            const double fwhm_nm = 0.15 + (0.75 - 0.15) * i / 20.0;
            sigmas.push_back(
                sigma_from_fwhm(omega_width_from_wavelength_width(fwhm_nm * 1e-9, 772e-9)));
        }
        const auto curve = g2_bandwidth_scan(crystal, pump, sigmas,
                                             SpatialFilterConfig{pump_beam, collection}, 256);
        std::size_t imax = 0;
        for (std::size_t i = 1; i < curve.size(); ++i)
            if (curve[i].g2 > curve[imax].g2) imax = i;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        check("4a. g2 scan maximum at pump FWHM 0.33 +- 0.05 nm",
              in_band(curve[imax].pump_fwhm_nm, 0.28, 0.38),
              "got " + fmt(curve[imax].pump_fwhm_nm) + " nm");
        check("4b. g2 scan peak value 1.92 +- 0.03", in_band(curve[imax].g2, 1.89, 1.95),
              "got " + fmt(curve[imax].g2));
        check("4c. 21-point scan on a 256^2 grid under 10 minutes", secs < 600.0,
              "took " + fmt(secs) + " s");
    }

    // 5./6. reference-point spatial model: Schmidt purity, JSI fit, HOM dips
    {
        const FrequencyGrid grid = default_grid(crystal, pump, 256);
        const JsaMatrix jsa = spatially_filtered_jsa(crystal, pump, pump_beam, grid, collection);
        const double purity = schmidt_decompose(jsa).purity;

        const MeasuredJsi measured = simulate_jsi_measurement(jsa, 0.2e-9, 0.05e-9);
        const JsiFitResult fit = fit_jsi_gaussian(measured);
        // Known model-vs-experiment discrepancy: the clean simulation's impurity lives
        // in non-Gaussian sidelobes that a 2D Gaussian fit cannot see, so the
        // fitted purity lands above the band fitted to the noisy measured map
        // in the source experiment. See README (reproducing published values).
        check("5a. fitted purity of the 0.2 nm filtered JSI measurement 0.91 +- 0.03",
              in_band(fit.purity, 0.88, 0.94), "got " + fmt(fit.purity));
        check("5b. unfiltered spatial-model Schmidt purity 0.918 +- 0.02",
              in_band(purity, 0.898, 0.938), "got " + fmt(purity));

        const ReducedState rs = reduced_state(jsa, Side::Signal);
        const ReducedState ri = reduced_state(jsa, Side::Idler);
        const double v_ss = hom_visibility(rs, rs);
        const double v_si = hom_visibility(rs, ri);
        check("6a. signal-signal HOM dip depth 0.91 +- 0.02", in_band(v_ss, 0.89, 0.93),
              "got " + fmt(v_ss));
        check("6b. signal-idler HOM dip depth 0.91 +- 0.02", in_band(v_si, 0.89, 0.93),
              "got " + fmt(v_si));
        const HomCurve at_zero = hom_dip(jsa, jsa, DipKind::SignalIdler, {0.0});
        check("6c. hom_dip(0) = 1 - visibility to 1e-9",
              std::abs(at_zero.probabilities[0] - (1.0 - v_si)) < 1e-9,
              "difference " + fmt(std::abs(at_zero.probabilities[0] - (1.0 - v_si))));

        // 9d. reduced-state purity equals the Schmidt purity
        const double tr2 = (rs.rho * rs.rho).trace().real();
        check("9d. Tr[rho_s^2] equals the Schmidt purity to 1e-9",
              std::abs(tr2 - purity) < 1e-9, "difference " + fmt(std::abs(tr2 - purity)));
    }

    // 7. focusing parameters
    {
        const double xi_pump = focusing_parameter(pump_beam, 0.03);
        const double xi_col = focusing_parameter(BeamSpec{187e-6, 1544e-9}, 0.03);
        check("7a. xi(296 um, 772 nm, 3 cm) = 0.0425 +- 0.001",
              in_band(xi_pump, 0.0415, 0.0435), "got " + fmt(xi_pump));
        check("7b. xi(187 um, 1544 nm, 3 cm) = 0.212 +- 0.002", in_band(xi_col, 0.210, 0.214),
              "got " + fmt(xi_col));
    }

    // 8. brightness arithmetic
    {
        PumpSpec bright = pump;
        bright.pulse_energy = 2.5e-9;
        const LossBudget budget{{{"optics", 0.50}, {"coupling", 0.46}}};
        const BrightnessReport r = brightness_report(0.01, bright, budget);
        check("8a. 0.01 pairs/pulse at 2.5 nJ -> 4.0 pairs/uJ",
              std::abs(r.source_pairs_per_joule * 1e-6 - 4.0) < 1e-12,
              "got " + fmt(r.source_pairs_per_joule * 1e-6));
        check("8b. 0.96 dB per photon -> 2.6 +- 0.05 pairs/uJ",
              in_band(r.fibered_pairs_per_joule * 1e-6, 2.55, 2.65),
              "got " + fmt(r.fibered_pairs_per_joule * 1e-6));
        const double pairs_600pj = r.source_pairs_per_joule * 600e-12;
        check("8c. 600 pJ per pulse -> 0.0024-0.0025 pairs",
              in_band(pairs_600pj, 0.0024 - 1e-12, 0.0025 + 1e-12), "got " + fmt(pairs_600pj));
    }

    // 9a-9c. property suite
    {
        std::mt19937 rng(20240612);
        std::uniform_real_distribution<double> amp(0.5, 2.0);
        std::uniform_real_distribution<double> corr(-0.75, 0.75);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            GaussianJsaCoefficients g;
            g.a = amp(rng);
            g.b = amp(rng);
            g.c = corr(rng) * 2.0 * std::sqrt(g.a * g.b);
            const double span =
                6.0 * std::max(g.marginal_sigma_signal(), g.marginal_sigma_idler());
            JsaMatrix jsa;
            jsa.grid.signal = GridAxis{1e3, span, 256};
            jsa.grid.idler = GridAxis{1e3, span, 256};
            jsa.amplitudes.resize(256, 256);
            for (int i = 0; i < 256; ++i)
                for (int j = 0; j < 256; ++j) {
                    const double x = jsa.grid.signal.value(i) - 1e3;
                    const double y = jsa.grid.idler.value(j) - 1e3;
                    jsa.amplitudes(i, j) = std::exp(-g.a * x * x - g.b * y * y - g.c * x * y);
                }
            jsa.normalize();
            worst = std::max(worst, std::abs(schmidt_decompose(jsa).purity -
                                             purity_gaussian_analytic(g)));
        }
        check("9a. Gaussian-analytic purity vs SVD oracle <= 1e-4 on 10 random triples",
              worst <= 1e-4, "worst " + fmt(worst));

        JsaMatrix rank1;
        rank1.grid.signal = GridAxis{1e3, 2.0, 64};
        rank1.grid.idler = GridAxis{1e3, 2.0, 64};
        rank1.amplitudes.resize(64, 64);
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                const double x = rank1.grid.signal.value(i) - 1e3;
                const double y = rank1.grid.idler.value(j) - 1e3;
                rank1.amplitudes(i, j) = std::exp(-x * x) * (1.0 + 0.5 * std::cos(y));
            }
        rank1.normalize();
        const double p1 = schmidt_decompose(rank1).purity;
        check("9b. rank-1 JSA purity 1 +- 1e-9", std::abs(p1 - 1.0) < 1e-9,
              "got 1 - " + fmt(1.0 - p1));

        const double p128 =
            schmidt_decompose(build_jsa(crystal, pump, default_grid(crystal, pump, 128),
                                        PmModel::Sinc))
                .purity;
        const double p256 =
            schmidt_decompose(build_jsa(crystal, pump, default_grid(crystal, pump, 256),
                                        PmModel::Sinc))
                .purity;
        check("9c. purity drift under grid refinement < 1e-3", std::abs(p128 - p256) < 1e-3,
              "drift " + fmt(std::abs(p128 - p256)));
    }

    // 9e. byte-identical CLI reruns
    {
        bool ok = false;
        std::string detail = "CLI path not supplied";
        if (!cli_path.empty()) {
            const fs::path scen = work / "design.ini";
            std::ofstream out(scen);
            out << "[crystal]\nmaterial = ktp-fluxgrown\nlength_mm = 30\n"
                   "poling_period_um = solve\npump_axis = X\nsignal_axis = Z\nidler_axis = X\n"
                   "[pump]\nwavelength_nm = 772\nsigma_rad_per_s = 467e9\n"
                   "pulse_energy_nj = 0.6\nrep_rate_mhz = 80\n"
                   "[study]\nname = design\n";
            out.close();
            const fs::path out_a = work / "a", out_b = work / "b";
            const std::string cmd_a =
                cli_path + " run " + scen.string() + " --out " + out_a.string() + " > /dev/null";
            const std::string cmd_b =
                cli_path + " run " + scen.string() + " --out " + out_b.string() + " > /dev/null";
            if (std::system(cmd_a.c_str()) == 0 && std::system(cmd_b.c_str()) == 0) {
                ok = true;
                int compared = 0;
                for (const auto& entry : fs::directory_iterator(out_a)) {
                    const auto rel = entry.path().filename();
                    const std::string a = slurp(entry.path());
                    const std::string b = slurp(out_b / rel);
                    ++compared;
                    if (a.empty() || a != b) {
                        ok = false;
                        detail = "mismatch in " + rel.string();
                        break;
                    }
                }
                if (ok) detail = fmt(compared) + " files byte-identical";
                if (compared == 0) ok = false;
            } else {
                detail = "CLI run failed";
            }
        }
        check("9e. byte-identical CLI reruns", ok, detail);
    }

    std::printf("%s: %d check(s) failed\n", failures == 0 ? "ALL PASS" : "RESULT", failures);
    return failures;
}
