#include "spdckit/studies.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <tuple>

#include "spdckit/io.hpp"
#include "spdckit/observables.hpp"
#include "spdckit/schmidt.hpp"
#include "spdckit/units.hpp"

namespace spdc {

using json = nlohmann::ordered_json;

namespace {

const std::vector<StudyDescription> kStudies = {
    {"design", "QPM design point: poling period, slowness product, optimal pump bandwidth"},
    {"bandwidth-scan", "g2(0) and purity versus pump FWHM"},
    {"waist-scan", "spectral/spatial-spectral purity and coupling versus collection waist"},
    {"jsi", "joint spectral intensity map with Schmidt analysis"},
    {"jsi-fit", "simulated two-filter JSI measurement with a 2D Gaussian fit"},
    {"hom", "Hong-Ou-Mandel dip curves for signal-signal and signal-idler"},
    {"brightness", "pairs/uJ source brightness with a dB loss budget"},
};

double param_double(const Scenario::Study& st, const std::string& key, double fallback) {
    auto it = st.params.find(key);
    if (it == st.params.end()) return fallback;
    return std::stod(it->second);
}

int param_int(const Scenario::Study& st, const std::string& key, int fallback) {
    return static_cast<int>(param_double(st, key, fallback));
}

double param_required(const Scenario::Study& st, const std::string& key) {
    auto it = st.params.find(key);
    if (it == st.params.end())
        throw std::runtime_error("study '" + st.name + "' needs parameter '" + key + "'");
    return std::stod(it->second);
}

void emit(const std::string& key, double value) {
    std::cout << key << " = " << format_sci(value) << "\n";
}

void write_summary(const std::string& out_dir, const json& summary) {
    write_text_file(out_dir + "/summary.json", summary.dump(2) + "\n");
}

void echo_scenario(const Scenario& scenario, const std::string& out_dir) {
    // post-default configuration; a "solve" period stays symbolic so the echo
    // re-resolves to bit-identical values
    write_text_file(out_dir + "/effective_scenario.ini", serialize_scenario(scenario));
}

JsaMatrix build_model_jsa(const ResolvedScenario& r, PmModel pm, std::string* model_name) {
    if (r.pump_beam && pm == PmModel::Sinc) {
        if (model_name) *model_name = "spatial-sinc";
        return spatially_filtered_jsa(r.crystal, r.pump, *r.pump_beam, r.grid, r.collection);
    }
    if (model_name) *model_name = pm == PmModel::Sinc ? "collinear-sinc" : "collinear-gaussian";
    return build_jsa(r.crystal, r.pump, r.grid, pm);
}

void run_design(const ResolvedScenario& r, const Scenario& sc, const std::string& out_dir) {
    const double lambda_p = r.pump.wavelength;
    const double period = solve_poling_period(r.sellmeier, r.crystal.pump_axis,
                                              r.crystal.signal_axis, r.crystal.idler_axis,
                                              lambda_p, 2 * lambda_p, 2 * lambda_p);
    const double wd = 0.5 * r.pump.omega0();
    const double kps = group_slowness(r.crystal.signal_axis, wd, r.sellmeier).value;
    const double kpi = group_slowness(r.crystal.idler_axis, wd, r.sellmeier).value;
    const double kpp = group_slowness(r.crystal.pump_axis, r.pump.omega0(), r.sellmeier).value;
    const double product = (kpp - kps) * (kpp - kpi);
    const auto opt = optimal_pump_bandwidth(product, r.crystal.length, lambda_p);
    const double residual = separability_residual(r.crystal, r.pump);

    json summary;
    summary["material"] = r.sellmeier.name;
    summary["poling_period_um"] = period * 1e6;
    summary["slowness_signal_s_per_m"] = kps;
    summary["slowness_pump_s_per_m"] = kpp;
    summary["slowness_idler_s_per_m"] = kpi;
    // published convention: slowness differences quoted in 1/(m GHz) each
    summary["slowness_product_per_m_ghz"] = product * 1e18;
    summary["optimal_sigma_rad_per_s"] = opt.sigma;
    summary["optimal_pulse_fwhm_ps"] = opt.fwhm_duration * 1e12;
    summary["optimal_pump_fwhm_nm"] = opt.fwhm_wavelength * 1e9;
    summary["separability_residual_at_configured_sigma"] = residual;
    summary["configured_sigma_rad_per_s"] = r.pump.sigma;
    if (r.pump_beam) {
        summary["xi_pump"] = focusing_parameter(*r.pump_beam, r.crystal.length);
        summary["xi_collection_signal"] = focusing_parameter(
            BeamSpec{r.collection.signal_waist, 2 * lambda_p}, r.crystal.length);
        summary["xi_collection_idler"] = focusing_parameter(
            BeamSpec{r.collection.idler_waist, 2 * lambda_p}, r.crystal.length);
    }
    write_summary(out_dir, summary);
    emit("poling_period_um", period * 1e6);
    emit("slowness_product_per_m_ghz", product * 1e18);
    emit("optimal_sigma_rad_per_s", opt.sigma);
    emit("optimal_pulse_fwhm_ps", opt.fwhm_duration * 1e12);
    emit("optimal_pump_fwhm_nm", opt.fwhm_wavelength * 1e9);
    (void)sc;
}

void run_bandwidth_scan(const ResolvedScenario& r, const Scenario& sc,
                        const std::string& out_dir) {
    const double lo = param_double(sc.study, "fwhm_min_nm", 0.15);
    const double hi = param_double(sc.study, "fwhm_max_nm", 0.75);
    const int npts = param_int(sc.study, "points", 21);
    if (!(hi > lo) || npts < 2) throw std::runtime_error("bandwidth-scan wants fwhm_min_nm < fwhm_max_nm and points >= 2");
    std::vector<double> sigmas;
    for (int i = 0; i < npts; ++i) {
        const double fwhm_nm = lo + (hi - lo) * i / (npts - 1);
        sigmas.push_back(sigma_from_fwhm(
            omega_width_from_wavelength_width(fwhm_nm * 1e-9, r.pump.wavelength)));
    }
    std::optional<SpatialFilterConfig> spatial;
    if (r.pump_beam) spatial = SpatialFilterConfig{*r.pump_beam, r.collection};
    const auto curve = g2_bandwidth_scan(r.crystal, r.pump, sigmas, spatial,
                                         r.grid.signal.points, sc.grid.span_multiplier);
    CsvTable table;
    table.header = {"pump_fwhm_nm", "purity", "g2_zero"};
    std::size_t imax = 0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        table.rows.push_back({curve[i].pump_fwhm_nm, curve[i].purity, curve[i].g2});
        if (curve[i].g2 > curve[imax].g2) imax = i;
    }
    write_csv(out_dir + "/bandwidth_scan.csv", table);
    json summary;
    summary["model"] = spatial ? "spatial-sinc" : "collinear-sinc";
    summary["peak_pump_fwhm_nm"] = curve[imax].pump_fwhm_nm;
    summary["peak_g2_zero"] = curve[imax].g2;
    summary["peak_purity"] = curve[imax].purity;
    summary["scan_points"] = static_cast<int>(curve.size());
    write_summary(out_dir, summary);
    emit("peak_pump_fwhm_nm", curve[imax].pump_fwhm_nm);
    emit("peak_g2_zero", curve[imax].g2);
}

void run_waist_scan(const ResolvedScenario& r, const Scenario& sc, const std::string& out_dir) {
    if (!r.pump_beam)
        throw std::runtime_error("waist-scan needs [beams] pump_waist_um (spatial model)");
    const double lo = param_double(sc.study, "waist_min_um", 100.0);
    const double hi = param_double(sc.study, "waist_max_um", 350.0);
    const int npts = param_int(sc.study, "points", 11);
    if (!(hi > lo) || npts < 2) throw std::runtime_error("waist-scan wants waist_min_um < waist_max_um and points >= 2");
    std::vector<double> waists;
    for (int i = 0; i < npts; ++i) waists.push_back((lo + (hi - lo) * i / (npts - 1)) * 1e-6);
    const auto rows =
        purity_vs_waist_scan(r.crystal, r.pump, *r.pump_beam, r.grid, r.collection, waists);
    CsvTable table;
    table.header = {"waist_um",      "spectral_purity",  "spatial_spectral_purity",
                    "pair_coupling", "heralded_signal",  "heralded_idler"};
    for (const auto& row : rows)
        table.rows.push_back({row.waist * 1e6, row.spectral_purity, row.spatial_spectral_purity,
                              row.pair_coupling, row.heralded_signal, row.heralded_idler});
    write_csv(out_dir + "/waist_scan.csv", table);
    json summary;
    summary["waist_min_um"] = lo;
    summary["waist_max_um"] = hi;
    summary["points"] = npts;
    summary["spectral_purity_first"] = rows.front().spectral_purity;
    summary["spectral_purity_last"] = rows.back().spectral_purity;
    write_summary(out_dir, summary);
    emit("spectral_purity_first", rows.front().spectral_purity);
    emit("spectral_purity_last", rows.back().spectral_purity);
}

void run_jsi(const ResolvedScenario& r, const Scenario& sc, const std::string& out_dir,
             PmModel pm) {
    (void)sc;
    std::string model;
    JsaMatrix jsa;
    CouplingReport coupling;
    const bool spatial = r.pump_beam && pm == PmModel::Sinc;
    if (spatial) {
        model = "spatial-sinc";
        const auto ssa = build_spatial_jsa(r.crystal, r.pump, *r.pump_beam, r.grid, r.collection);
        std::tie(jsa, coupling) = project_to_fiber(ssa, r.collection);
    } else {
        jsa = build_model_jsa(r, pm, &model);
    }
    const SchmidtResult schmidt = schmidt_decompose(jsa);

    CsvTable map;
    map.header = {"delta_omega_s_rad_per_s", "delta_omega_i_rad_per_s", "jsi"};
    for (int i = 0; i < jsa.grid.signal.points; ++i)
        for (int j = 0; j < jsa.grid.idler.points; ++j)
            map.rows.push_back({jsa.grid.signal.value(i) - jsa.grid.signal.center,
                                jsa.grid.idler.value(j) - jsa.grid.idler.center,
                                std::norm(jsa.amplitudes(i, j))});
    write_csv(out_dir + "/jsi.csv", map);

    CsvTable modes;
    modes.header = {"delta_omega_s_rad_per_s"};
    const int nmodes = static_cast<int>(schmidt.signal_modes.cols());
    for (int m = 0; m < nmodes; ++m) modes.header.push_back("mode_" + std::to_string(m));
    for (int i = 0; i < jsa.grid.signal.points; ++i) {
        std::vector<double> row{jsa.grid.signal.value(i) - jsa.grid.signal.center};
        for (int m = 0; m < nmodes; ++m) row.push_back(schmidt.signal_modes(i, m).real());
        modes.rows.push_back(row);
    }
    write_csv(out_dir + "/schmidt_modes.csv", modes);

    json summary;
    summary["model"] = model;
    summary["purity"] = schmidt.purity;
    summary["schmidt_number"] = schmidt.schmidt_number;
    summary["g2_zero"] = g2_zero(schmidt.purity);
    summary["poling_period_um"] = r.crystal.poling_period * 1e6;
    if (spatial) {
        summary["pair_coupling"] = coupling.pair;
        summary["heralded_signal"] = coupling.heralded_signal;
        summary["heralded_idler"] = coupling.heralded_idler;
        emit("heralded_signal", coupling.heralded_signal);
    }
    write_summary(out_dir, summary);
    emit("purity", schmidt.purity);
    emit("schmidt_number", schmidt.schmidt_number);
    emit("g2_zero", g2_zero(schmidt.purity));
}

void run_jsi_fit(const ResolvedScenario& r, const Scenario& sc, const std::string& out_dir,
                 PmModel pm) {
    std::string model;
    const JsaMatrix jsa = build_model_jsa(r, pm, &model);
    const double filter_fwhm = param_double(sc.study, "filter_fwhm_nm", 0.2) * 1e-9;
    const double step = param_double(sc.study, "filter_step_nm", 0.05) * 1e-9;
    const MeasuredJsi measured = simulate_jsi_measurement(jsa, filter_fwhm, step);
    for (const auto& w : measured.warnings) std::cerr << "warning: " << w << "\n";

    CsvTable map;
    map.header = {"filter_s_nm", "filter_i_nm", "coincidence"};
    for (int i = 0; i < measured.signal_axis.points; ++i)
        for (int j = 0; j < measured.idler_axis.points; ++j)
            map.rows.push_back(
                {wavelength_from_omega(measured.signal_axis.value(i)) * 1e9,
                 wavelength_from_omega(measured.idler_axis.value(j)) * 1e9,
                 measured.intensity(i, j)});
    write_csv(out_dir + "/measured_jsi.csv", map);

    const JsiFitResult fit = fit_jsi_gaussian(measured);
    const SchmidtResult schmidt = schmidt_decompose(jsa);
    json summary;
    summary["model"] = model;
    summary["filter_fwhm_nm"] = filter_fwhm * 1e9;
    summary["filter_step_nm"] = step * 1e9;
    summary["fitted_purity"] = fit.purity;
    summary["fit_intensity_a_s2"] = fit.intensity_a;
    summary["fit_intensity_b_s2"] = fit.intensity_b;
    summary["fit_intensity_c_s2"] = fit.intensity_c;
    summary["fit_rms_residual"] = fit.rms_residual;
    summary["schmidt_purity_unfiltered"] = schmidt.purity;
    write_summary(out_dir, summary);
    emit("fitted_purity", fit.purity);
    emit("fit_rms_residual", fit.rms_residual);
    emit("schmidt_purity_unfiltered", schmidt.purity);
}

void run_hom(const ResolvedScenario& r, const Scenario& sc, const std::string& out_dir,
             PmModel pm) {
    std::string model;
    const JsaMatrix jsa = build_model_jsa(r, pm, &model);
    const double lo = param_double(sc.study, "delay_min_ps", -8.0);
    const double hi = param_double(sc.study, "delay_max_ps", 8.0);
    const int npts = param_int(sc.study, "points", 81);
    if (!(hi > lo) || npts < 2) throw std::runtime_error("hom wants delay_min_ps < delay_max_ps and points >= 2");
    std::vector<double> delays;
    for (int i = 0; i < npts; ++i) delays.push_back((lo + (hi - lo) * i / (npts - 1)) * 1e-12);
    const HomCurve ss = hom_dip(jsa, jsa, DipKind::SignalSignal, delays);
    const HomCurve si = hom_dip(jsa, jsa, DipKind::SignalIdler, delays);
    CsvTable table;
    table.header = {"delay_ps", "p_signal_signal", "p_signal_idler"};
    for (int i = 0; i < npts; ++i)
        table.rows.push_back({delays[i] * 1e12, ss.probabilities[i], si.probabilities[i]});
    write_csv(out_dir + "/hom_dip.csv", table);

    const ReducedState rs = reduced_state(jsa, Side::Signal);
    const ReducedState ri = reduced_state(jsa, Side::Idler);
    const double v_ss = hom_visibility(rs, rs);
    const double v_si = hom_visibility(rs, ri);
    json summary;
    summary["model"] = model;
    summary["visibility_signal_signal"] = v_ss;
    summary["visibility_signal_idler"] = v_si;
    summary["dip_depth_signal_signal"] = 1.0 - ss.probabilities[npts / 2];
    summary["dip_depth_signal_idler"] = 1.0 - si.probabilities[npts / 2];
    write_summary(out_dir, summary);
    emit("visibility_signal_signal", v_ss);
    emit("visibility_signal_idler", v_si);
}

void run_brightness(const ResolvedScenario& r, const Scenario& sc, const std::string& out_dir) {
    const double pairs = param_required(sc.study, "pairs_per_pulse");
    LossBudget budget;
    for (const auto& [key, value] : sc.study.params) {
        if (key.rfind("loss_", 0) == 0 && key.size() > 8 && key.substr(key.size() - 3) == "_db")
            budget.entries.emplace_back(key.substr(5, key.size() - 8), std::stod(value));
    }
    const BrightnessReport rep = brightness_report(pairs, r.pump, budget);
    std::string budget_csv = "label,loss_db\n";
    for (const auto& [label, db] : budget.entries)
        budget_csv += label + "," + format_sci(db) + "\n";
    budget_csv += "total," + format_sci(rep.loss_db_per_photon) + "\n";
    write_text_file(out_dir + "/loss_budget.csv", budget_csv);

    json summary;
    summary["pairs_per_pulse"] = rep.pairs_per_pulse;
    summary["pulse_energy_nj"] = rep.pulse_energy * 1e9;
    summary["source_brightness_pairs_per_uj"] = rep.source_pairs_per_joule * 1e-6;
    summary["fibered_brightness_pairs_per_uj"] = rep.fibered_pairs_per_joule * 1e-6;
    summary["heralded_singles_per_uj"] = rep.heralded_singles_per_joule * 1e-6;
    summary["loss_db_per_photon"] = rep.loss_db_per_photon;
    summary["pair_transmission"] = rep.pair_transmission;
    if (r.pump.rep_rate > 0.0)
        summary["fibered_pair_rate_per_s"] =
            rep.pairs_per_pulse * rep.pair_transmission * r.pump.rep_rate;
    write_summary(out_dir, summary);
    emit("source_brightness_pairs_per_uj", rep.source_pairs_per_joule * 1e-6);
    emit("fibered_brightness_pairs_per_uj", rep.fibered_pairs_per_joule * 1e-6);
    emit("loss_db_per_photon", rep.loss_db_per_photon);
}

}  // namespace

const std::vector<StudyDescription>& list_studies() { return kStudies; }

void run_study(const Scenario& scenario_in, const std::string& out_dir,
               const RunOverrides& overrides) {
    Scenario scenario = scenario_in;
    if (overrides.grid_points) scenario.grid.points = *overrides.grid_points;
    const PmModel pm = overrides.pm_model.value_or(PmModel::Sinc);

    const auto known = std::find_if(kStudies.begin(), kStudies.end(),
                                    [&](const auto& d) { return d.name == scenario.study.name; });
    if (known == kStudies.end()) {
        std::string names;
        for (const auto& d : kStudies) names += (names.empty() ? "" : ", ") + d.name;
        throw std::runtime_error("unknown study '" + scenario.study.name +
                                 "' (valid: " + names + ")");
    }

    std::filesystem::create_directories(out_dir);
    const ResolvedScenario r = resolve_scenario(scenario);
    echo_scenario(scenario, out_dir);

    const std::string& name = scenario.study.name;
    if (name == "design") run_design(r, scenario, out_dir);
    else if (name == "bandwidth-scan") run_bandwidth_scan(r, scenario, out_dir);
    else if (name == "waist-scan") run_waist_scan(r, scenario, out_dir);
    else if (name == "jsi") run_jsi(r, scenario, out_dir, pm);
    else if (name == "jsi-fit") run_jsi_fit(r, scenario, out_dir, pm);
    else if (name == "hom") run_hom(r, scenario, out_dir, pm);
    else if (name == "brightness") run_brightness(r, scenario, out_dir);
}

}  // namespace spdc
