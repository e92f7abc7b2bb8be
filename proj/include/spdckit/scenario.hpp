#ifndef SPDCKIT_SCENARIO_HPP
#define SPDCKIT_SCENARIO_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "spdckit/jsa.hpp"
#include "spdckit/spatial.hpp"

namespace spdc {

/// Scenario file contents, kept in the file's own display units so the
/// effective-configuration echo reproduces runs byte for byte. All
/// dimensioned keys carry unit suffixes; the grammar is documented in the
/// README.
struct Scenario {
    struct Crystal {
        std::string material = "ktp-kato-takaoka";
        double length_mm = 30.0;
        std::optional<double> poling_period_um;  // empty = "solve"
        Axis pump_axis = Axis::X;
        Axis signal_axis = Axis::X;
        Axis idler_axis = Axis::Z;
    };
    struct Pump {
        double wavelength_nm = 772.0;
        std::optional<double> sigma_rad_per_s;  // exactly one width given
        std::optional<double> fwhm_nm;
        std::optional<double> fwhm_ps;
        PumpShape shape = PumpShape::Gaussian;
        double pulse_energy_nj = 0.0;
        double rep_rate_mhz = 0.0;
    };
    struct Beams {
        std::optional<double> pump_waist_um;  // presence enables the spatial model
        double signal_waist_um = 187.0;
        double idler_waist_um = 187.0;
        int transverse_points = 32;
    };
    struct Grid {
        int points = 256;
        double span_multiplier = 5.0;
    };
    struct Study {
        std::string name;
        std::map<std::string, std::string> params;
    };

    Crystal crystal;
    Pump pump;
    Beams beams;
    Grid grid;
    Study study;
};

/// Parse a scenario file. Malformed lines raise std::runtime_error with the
/// origin and line number.
Scenario parse_scenario(std::istream& in, const std::string& origin);
Scenario load_scenario_file(const std::string& path);

/// Effective configuration serialized back to the scenario grammar; parsing
/// the output reproduces the scenario exactly.
std::string serialize_scenario(const Scenario& s);

/// Resolved physics inputs of a scenario (SI units).
struct ResolvedScenario {
    SellmeierSet sellmeier;
    CrystalSpec crystal;       // poling period solved when requested
    PumpSpec pump;             // width resolved to sigma
    std::optional<BeamSpec> pump_beam;
    CollectionSpec collection;
    FrequencyGrid grid;
    bool poling_was_solved = false;
};

ResolvedScenario resolve_scenario(const Scenario& s);

}  // namespace spdc

#endif
