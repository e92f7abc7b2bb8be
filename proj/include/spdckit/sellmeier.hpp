#ifndef SPDCKIT_SELLMEIER_HPP
#define SPDCKIT_SELLMEIER_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace spdc {

enum class Axis { X = 0, Y = 1, Z = 2 };

const char* axis_name(Axis a);
Axis axis_from_name(const std::string& name);

/// Dispersion curve for one principal axis, with wavelength in micrometers:
///
///   n^2(l) = constant + sum_j p_j / (l^2 - q_j)
///                     + sum_j r_j l^2 / (l^2 - s_j)
///                     + poly2 l^2 + poly4 l^4
///
/// The two rational term styles cover the published KTP coefficient sets
/// (Kato-Takaoka use p/(l^2-q); Fradkin and Konig-Wong use r l^2/(l^2-s)).
struct AxisDispersion {
    double constant = 0.0;
    std::vector<std::pair<double, double>> pole_terms;      // p, q
    std::vector<std::pair<double, double>> resonant_terms;  // r, s
    double poly2 = 0.0;
    double poly4 = 0.0;

    double n_squared(double lambda_um) const;
};

struct SellmeierSet {
    std::string name;
    std::string provenance;
    std::array<AxisDispersion, 3> axes;
    double window_min_m = 0.0;  // validity window, wavelength in meters
    double window_max_m = 0.0;

    const AxisDispersion& axis(Axis a) const { return axes[static_cast<int>(a)]; }
    bool in_window(double lambda_m) const {
        return lambda_m >= window_min_m && lambda_m <= window_max_m;
    }
    /// Throws std::domain_error naming the window when lambda is outside it.
    void require_in_window(double lambda_m) const;
};

/// n(lambda) for the given axis. Checks the validity window and the
/// physicality bounds 1 < n < 3.
double refractive_index(Axis axis, double lambda_m, const SellmeierSet& set);

/// Built-in coefficient sets. Names: "ktp-kato-takaoka", "ktp-fluxgrown".
const SellmeierSet& builtin_sellmeier(const std::string& name);
std::vector<std::string> builtin_sellmeier_names();

/// Parse a Sellmeier set from the structured text format described in the
/// README (sections per axis, term lines, window in nm). Throws
/// std::runtime_error with a line number on malformed input.
SellmeierSet parse_sellmeier(std::istream& in, const std::string& origin);
SellmeierSet load_sellmeier_file(const std::string& path);

/// Resolve a material name: built-in set name, or a path to a set file.
SellmeierSet resolve_sellmeier(const std::string& name_or_path);

}  // namespace spdc

#endif
