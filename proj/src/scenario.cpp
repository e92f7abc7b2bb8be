#include "spdckit/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spdckit/units.hpp"

namespace spdc {

namespace {

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw std::runtime_error(os.str());
}

double to_double(const std::string& origin, int line, const std::string& key,
                 const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(origin, line, "key '" + key + "' wants a number, got '" + value + "'");
    }
}

int to_int(const std::string& origin, int line, const std::string& key,
           const std::string& value) {
    const double v = to_double(origin, line, key, value);
    if (v != std::floor(v)) fail(origin, line, "key '" + key + "' wants an integer");
    return static_cast<int>(v);
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& origin) {
    Scenario s;
    std::string section;
    std::string raw;
    int lineno = 0;
    bool have_study = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated section header");
            section = trimmed(line.substr(1, line.size() - 2));
            if (section != "crystal" && section != "pump" && section != "beams" &&
                section != "grid" && section != "study")
                fail(origin, lineno, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (section.empty()) fail(origin, lineno, "key before any section header");
        if (value.empty()) fail(origin, lineno, "key '" + key + "' has no value");

        if (section == "crystal") {
            if (key == "material") s.crystal.material = value;
            else if (key == "length_mm") s.crystal.length_mm = to_double(origin, lineno, key, value);
            else if (key == "poling_period_um") {
                if (value == "solve") s.crystal.poling_period_um.reset();
                else s.crystal.poling_period_um = to_double(origin, lineno, key, value);
            }
            else if (key == "pump_axis") s.crystal.pump_axis = axis_from_name(value);
            else if (key == "signal_axis") s.crystal.signal_axis = axis_from_name(value);
            else if (key == "idler_axis") s.crystal.idler_axis = axis_from_name(value);
            else fail(origin, lineno, "unknown key '" + key + "' in [crystal]");
        } else if (section == "pump") {
            if (key == "wavelength_nm") s.pump.wavelength_nm = to_double(origin, lineno, key, value);
            else if (key == "sigma_rad_per_s") s.pump.sigma_rad_per_s = to_double(origin, lineno, key, value);
            else if (key == "fwhm_nm") s.pump.fwhm_nm = to_double(origin, lineno, key, value);
            else if (key == "fwhm_ps") s.pump.fwhm_ps = to_double(origin, lineno, key, value);
            else if (key == "shape") {
                if (value == "gaussian") s.pump.shape = PumpShape::Gaussian;
                else if (value == "sech2") s.pump.shape = PumpShape::Sech2;
                else fail(origin, lineno, "shape wants 'gaussian' or 'sech2'");
            }
            else if (key == "pulse_energy_nj") s.pump.pulse_energy_nj = to_double(origin, lineno, key, value);
            else if (key == "rep_rate_mhz") s.pump.rep_rate_mhz = to_double(origin, lineno, key, value);
            else fail(origin, lineno, "unknown key '" + key + "' in [pump]");
        } else if (section == "beams") {
            if (key == "pump_waist_um") s.beams.pump_waist_um = to_double(origin, lineno, key, value);
            else if (key == "signal_waist_um") s.beams.signal_waist_um = to_double(origin, lineno, key, value);
            else if (key == "idler_waist_um") s.beams.idler_waist_um = to_double(origin, lineno, key, value);
            else if (key == "transverse_points") s.beams.transverse_points = to_int(origin, lineno, key, value);
            else fail(origin, lineno, "unknown key '" + key + "' in [beams]");
        } else if (section == "grid") {
            if (key == "points") s.grid.points = to_int(origin, lineno, key, value);
            else if (key == "span_multiplier") s.grid.span_multiplier = to_double(origin, lineno, key, value);
            else fail(origin, lineno, "unknown key '" + key + "' in [grid]");
        } else {  // study
            if (key == "name") {
                s.study.name = value;
                have_study = true;
            } else {
                s.study.params[key] = value;
            }
        }
    }
    if (!have_study) throw std::runtime_error(origin + ": missing [study] name");
    const int widths = (s.pump.sigma_rad_per_s ? 1 : 0) + (s.pump.fwhm_nm ? 1 : 0) +
                       (s.pump.fwhm_ps ? 1 : 0);
    if (widths != 1)
        throw std::runtime_error(origin +
                                 ": exactly one pump width among sigma_rad_per_s, fwhm_nm, "
                                 "fwhm_ps must be given");
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    return parse_scenario(in, path);
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream os;
    os << "[crystal]\n";
    os << "material = " << s.crystal.material << "\n";
    os << "length_mm = " << fmt_full(s.crystal.length_mm) << "\n";
    if (s.crystal.poling_period_um)
        os << "poling_period_um = " << fmt_full(*s.crystal.poling_period_um) << "\n";
    else
        os << "poling_period_um = solve\n";
    os << "pump_axis = " << axis_name(s.crystal.pump_axis) << "\n";
    os << "signal_axis = " << axis_name(s.crystal.signal_axis) << "\n";
    os << "idler_axis = " << axis_name(s.crystal.idler_axis) << "\n";
    os << "\n[pump]\n";
    os << "wavelength_nm = " << fmt_full(s.pump.wavelength_nm) << "\n";
    if (s.pump.sigma_rad_per_s)
        os << "sigma_rad_per_s = " << fmt_full(*s.pump.sigma_rad_per_s) << "\n";
    if (s.pump.fwhm_nm) os << "fwhm_nm = " << fmt_full(*s.pump.fwhm_nm) << "\n";
    if (s.pump.fwhm_ps) os << "fwhm_ps = " << fmt_full(*s.pump.fwhm_ps) << "\n";
    os << "shape = " << (s.pump.shape == PumpShape::Gaussian ? "gaussian" : "sech2") << "\n";
    if (s.pump.pulse_energy_nj > 0.0)
        os << "pulse_energy_nj = " << fmt_full(s.pump.pulse_energy_nj) << "\n";
    if (s.pump.rep_rate_mhz > 0.0)
        os << "rep_rate_mhz = " << fmt_full(s.pump.rep_rate_mhz) << "\n";
    os << "\n[beams]\n";
    if (s.beams.pump_waist_um)
        os << "pump_waist_um = " << fmt_full(*s.beams.pump_waist_um) << "\n";
    os << "signal_waist_um = " << fmt_full(s.beams.signal_waist_um) << "\n";
    os << "idler_waist_um = " << fmt_full(s.beams.idler_waist_um) << "\n";
    os << "transverse_points = " << s.beams.transverse_points << "\n";
    os << "\n[grid]\n";
    os << "points = " << s.grid.points << "\n";
    os << "span_multiplier = " << fmt_full(s.grid.span_multiplier) << "\n";
    os << "\n[study]\n";
    os << "name = " << s.study.name << "\n";
    for (const auto& [k, v] : s.study.params) os << k << " = " << v << "\n";
    return os.str();
}

ResolvedScenario resolve_scenario(const Scenario& s) {
    ResolvedScenario r;
    r.sellmeier = resolve_sellmeier(s.crystal.material);

    const double wavelength = s.pump.wavelength_nm * 1e-9;
    double sigma = 0.0;
    if (s.pump.sigma_rad_per_s) {
        sigma = *s.pump.sigma_rad_per_s;
    } else if (s.pump.fwhm_nm) {
        sigma = sigma_from_fwhm(
            omega_width_from_wavelength_width(*s.pump.fwhm_nm * 1e-9, wavelength));
    } else if (s.pump.fwhm_ps) {
        // transform-limited Gaussian pulse: dnu_FWHM dt_FWHM = 2 ln 2 / pi
        const double dnu =
            2.0 * std::log(2.0) / (3.14159265358979323846 * *s.pump.fwhm_ps * 1e-12);
        sigma = sigma_from_fwhm(two_pi * dnu);
    } else {
        throw std::runtime_error("scenario has no pump width");
    }
    r.pump = PumpSpec{wavelength, sigma, s.pump.shape, s.pump.pulse_energy_nj * 1e-9,
                      s.pump.rep_rate_mhz * 1e6};
    r.pump.validate();

    r.crystal.length = s.crystal.length_mm * 1e-3;
    r.crystal.pump_axis = s.crystal.pump_axis;
    r.crystal.signal_axis = s.crystal.signal_axis;
    r.crystal.idler_axis = s.crystal.idler_axis;
    r.crystal.sellmeier = r.sellmeier;
    if (s.crystal.poling_period_um) {
        r.crystal.poling_period = *s.crystal.poling_period_um * 1e-6;
    } else {
        r.crystal.poling_period = solve_poling_period(
            r.sellmeier, s.crystal.pump_axis, s.crystal.signal_axis, s.crystal.idler_axis,
            wavelength, 2.0 * wavelength, 2.0 * wavelength);
        r.poling_was_solved = true;
    }
    r.crystal.validate();

    if (s.beams.pump_waist_um)
        r.pump_beam = BeamSpec{*s.beams.pump_waist_um * 1e-6, wavelength};
    r.collection = CollectionSpec{s.beams.signal_waist_um * 1e-6,
                                  s.beams.idler_waist_um * 1e-6, s.beams.transverse_points};
    r.grid = default_grid(r.crystal, r.pump, s.grid.points, s.grid.span_multiplier);
    return r;
}

}  // namespace spdc
