#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "spdckit/scenario.hpp"
#include "spdckit/studies.hpp"

namespace {

const char* kUnitsFooter =
    "Scenario files use unit-suffixed keys throughout: lengths in the key name\n"
    "(length_mm, poling_period_um, wavelength_nm, pump_waist_um), pump widths as\n"
    "exactly one of sigma_rad_per_s | fwhm_nm | fwhm_ps, energies as\n"
    "pulse_energy_nj, rates as rep_rate_mhz, delays as delay_*_ps. See the README\n"
    "for the full grammar and the Sellmeier set file format.";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spdckit - type-II SPDC photon-pair source design and simulation"};
    app.footer(kUnitsFooter);
    app.require_subcommand(0, 1);

    std::string scenario_path;
    std::string out_dir = "out";
    int grid_points = 0;
    std::string pm_name;
    bool seedless = false;

    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", scenario_path, "scenario file path")->required();
    run->add_option("--out", out_dir, "output directory (default: out)");
    run->add_option("--grid", grid_points, "override [grid] points");
    run->add_option("--pm", pm_name, "phase-matching model: sinc | gaussian")
        ->check(CLI::IsMember({"sinc", "gaussian"}));
    run->add_flag("--seedless", seedless,
                  "assert the run uses no random numbers (always true here)");

    CLI::App* studies = app.add_subcommand("studies", "list the available studies");

    CLI11_PARSE(app, argc, argv);

    try {
        if (studies->parsed()) {
            for (const auto& d : spdc::list_studies())
                std::cout << d.name << "  -  " << d.summary << "\n";
            return 0;
        }
        if (run->parsed()) {
            const spdc::Scenario scenario = spdc::load_scenario_file(scenario_path);
            spdc::RunOverrides overrides;
            if (grid_points > 0) overrides.grid_points = grid_points;
            if (pm_name == "sinc") overrides.pm_model = spdc::PmModel::Sinc;
            if (pm_name == "gaussian") overrides.pm_model = spdc::PmModel::Gaussian;
            overrides.seedless = seedless;
            spdc::run_study(scenario, out_dir, overrides);
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
