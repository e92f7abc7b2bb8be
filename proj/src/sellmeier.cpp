#include "spdckit/sellmeier.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spdc {

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::X: return "X";
        case Axis::Y: return "Y";
        case Axis::Z: return "Z";
    }
    return "?";
}

Axis axis_from_name(const std::string& name) {
    if (name == "X" || name == "x") return Axis::X;
    if (name == "Y" || name == "y") return Axis::Y;
    if (name == "Z" || name == "z") return Axis::Z;
    throw std::invalid_argument("unknown axis '" + name + "' (expected X, Y or Z)");
}

double AxisDispersion::n_squared(double lambda_um) const {
    const double l2 = lambda_um * lambda_um;
    double v = constant;
    for (const auto& [p, q] : pole_terms) v += p / (l2 - q);
    for (const auto& [r, s] : resonant_terms) v += r * l2 / (l2 - s);
    v += poly2 * l2 + poly4 * l2 * l2;
    return v;
}

void SellmeierSet::require_in_window(double lambda_m) const {
    if (!in_window(lambda_m)) {
        std::ostringstream os;
        os << "wavelength " << lambda_m * 1e9 << " nm outside validity window ["
           << window_min_m * 1e9 << ", " << window_max_m * 1e9 << "] nm of Sellmeier set '"
           << name << "'";
        throw std::domain_error(os.str());
    }
}

double refractive_index(Axis axis, double lambda_m, const SellmeierSet& set) {
    set.require_in_window(lambda_m);
    const double n2 = set.axis(axis).n_squared(lambda_m * 1e6);
    if (!(n2 > 1.0) || !std::isfinite(n2)) {
        std::ostringstream os;
        os << "Sellmeier set '" << set.name << "' axis " << axis_name(axis)
           << " gives unphysical n^2 = " << n2 << " at " << lambda_m * 1e9 << " nm";
        throw std::domain_error(os.str());
    }
    const double n = std::sqrt(n2);
    if (n >= 3.0) {
        std::ostringstream os;
        os << "Sellmeier set '" << set.name << "' axis " << axis_name(axis)
           << " gives n = " << n << " >= 3 at " << lambda_m * 1e9 << " nm";
        throw std::domain_error(os.str());
    }
    return n;
}

namespace {

SellmeierSet make_kato_takaoka() {
    // K. Kato and E. Takaoka, Appl. Opt. 41, 5040 (2002). Flux-grown KTP,
    // crystallographic axes, valid 0.43-3.54 um.
    SellmeierSet s;
    s.name = "ktp-kato-takaoka";
    s.provenance =
        "KTP, Kato & Takaoka, Appl. Opt. 41, 5040 (2002); crystallographic axes";
    s.axes[0].constant = 3.29100;
    s.axes[0].pole_terms = {{0.04140, 0.03978}, {9.35522, 31.45571}};
    s.axes[1].constant = 3.45018;
    s.axes[1].pole_terms = {{0.04341, 0.04597}, {16.98825, 39.43799}};
    s.axes[2].constant = 4.59423;
    s.axes[2].pole_terms = {{0.06206, 0.04763}, {110.80672, 86.12171}};
    s.window_min_m = 430e-9;
    s.window_max_m = 3540e-9;
    return s;
}

SellmeierSet make_fluxgrown() {
    // Flux-grown KTP in the lab-frame labelling used for telecom type-II
    // sources: the beam propagates along the crystallographic x axis, so the
    // transverse axis labelled X here carries the crystallographic y curve.
    //   X: F. Konig & F. N. C. Wong, Appl. Phys. Lett. 84, 1644 (2004), n_y fit
    //   Y: Kato & Takaoka (2002) n_x (propagation axis, normally unused)
    //   Z: T. Fradkin et al., Appl. Phys. Lett. 74, 914 (1999), n_z fit
    SellmeierSet s;
    s.name = "ktp-fluxgrown";
    s.provenance =
        "flux-grown KTP, lab axes (X = crystallographic y): X Konig-Wong APL 84, 1644 "
        "(2004); Y Kato-Takaoka n_x; Z Fradkin APL 74, 914 (1999)";
    s.axes[0].constant = 2.09930;
    s.axes[0].resonant_terms = {{0.922683, 0.0467695}};
    s.axes[0].poly2 = -0.0138408;
    s.axes[1].constant = 3.29100;
    s.axes[1].pole_terms = {{0.04140, 0.03978}, {9.35522, 31.45571}};
    s.axes[2].constant = 2.12725;
    s.axes[2].resonant_terms = {{1.18431, 0.0514852}, {0.6603, 100.00507}};
    s.axes[2].poly2 = -0.00968956;
    s.window_min_m = 530e-9;
    s.window_max_m = 3300e-9;
    return s;
}

const std::map<std::string, SellmeierSet>& builtin_registry() {
    static const std::map<std::string, SellmeierSet> reg = [] {
        std::map<std::string, SellmeierSet> m;
        SellmeierSet kt = make_kato_takaoka();
        SellmeierSet fg = make_fluxgrown();
        m.emplace(kt.name, std::move(kt));
        m.emplace(fg.name, std::move(fg));
        return m;
    }();
    return reg;
}

}  // namespace

const SellmeierSet& builtin_sellmeier(const std::string& name) {
    const auto& reg = builtin_registry();
    auto it = reg.find(name);
    if (it == reg.end()) {
        std::string known;
        for (const auto& [k, v] : reg) known += (known.empty() ? "" : ", ") + k;
        throw std::invalid_argument("unknown built-in Sellmeier set '" + name +
                                    "' (known: " + known + ")");
    }
    return it->second;
}

std::vector<std::string> builtin_sellmeier_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : builtin_registry()) names.push_back(k);
    return names;
}

namespace {

std::string trimmed(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& msg) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << msg;
    throw std::runtime_error(os.str());
}

}  // namespace

SellmeierSet parse_sellmeier(std::istream& in, const std::string& origin) {
    SellmeierSet set;
    set.name = origin;
    int axis = -1;
    bool window_seen = false;
    std::array<bool, 3> axis_seen = {false, false, false};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') parse_fail(origin, lineno, "unterminated section header");
            const std::string sec = trimmed(line.substr(1, line.size() - 2));
            if (sec.rfind("axis.", 0) != 0)
                parse_fail(origin, lineno, "expected section [axis.X|axis.Y|axis.Z], got [" + sec + "]");
            try {
                axis = static_cast<int>(axis_from_name(sec.substr(5)));
            } catch (const std::exception& e) {
                parse_fail(origin, lineno, e.what());
            }
            axis_seen[axis] = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(origin, lineno, "expected 'key = values'");
        const std::string key = trimmed(line.substr(0, eq));
        std::istringstream vals(line.substr(eq + 1));
        if (key == "name") {
            std::string v;
            std::getline(vals, v);
            set.name = trimmed(v);
            continue;
        }
        if (key == "provenance") {
            std::string v;
            std::getline(vals, v);
            set.provenance = trimmed(v);
            continue;
        }
        if (key == "window_nm") {
            double lo = 0, hi = 0;
            if (!(vals >> lo >> hi) || lo <= 0 || hi <= lo)
                parse_fail(origin, lineno, "window_nm wants two increasing positive numbers");
            set.window_min_m = lo * 1e-9;
            set.window_max_m = hi * 1e-9;
            window_seen = true;
            continue;
        }
        if (axis < 0) parse_fail(origin, lineno, "coefficient line before any [axis.*] section");
        AxisDispersion& d = set.axes[axis];
        if (key == "constant") {
            if (!(vals >> d.constant)) parse_fail(origin, lineno, "constant wants one number");
        } else if (key == "pole") {
            double p = 0, q = 0;
            if (!(vals >> p >> q)) parse_fail(origin, lineno, "pole wants two numbers: p q");
            d.pole_terms.emplace_back(p, q);
        } else if (key == "resonant") {
            double r = 0, s = 0;
            if (!(vals >> r >> s)) parse_fail(origin, lineno, "resonant wants two numbers: r s");
            d.resonant_terms.emplace_back(r, s);
        } else if (key == "poly2") {
            if (!(vals >> d.poly2)) parse_fail(origin, lineno, "poly2 wants one number");
        } else if (key == "poly4") {
            if (!(vals >> d.poly4)) parse_fail(origin, lineno, "poly4 wants one number");
        } else {
            parse_fail(origin, lineno, "unknown key '" + key + "'");
        }
        double trailing;
        if (vals >> trailing) parse_fail(origin, lineno, "trailing values after '" + key + "'");
    }
    if (!window_seen) throw std::runtime_error(origin + ": missing window_nm");
    for (int a = 0; a < 3; ++a)
        if (!axis_seen[a])
            throw std::runtime_error(origin + ": missing section [axis." +
                                     std::string(axis_name(static_cast<Axis>(a))) + "]");
    return set;
}

SellmeierSet load_sellmeier_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open Sellmeier file '" + path + "'");
    return parse_sellmeier(in, path);
}

SellmeierSet resolve_sellmeier(const std::string& name_or_path) {
    const auto& reg = builtin_registry();
    auto it = reg.find(name_or_path);
    if (it != reg.end()) return it->second;
    if (name_or_path.find('.') != std::string::npos ||
        name_or_path.find('/') != std::string::npos)
        return load_sellmeier_file(name_or_path);
    return builtin_sellmeier(name_or_path);  // throws with the known-name list
}

}  // namespace spdc
