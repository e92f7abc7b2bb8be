#ifndef SPDCKIT_DISPERSION_HPP
#define SPDCKIT_DISPERSION_HPP

#include "spdckit/sellmeier.hpp"

namespace spdc {

/// Interaction geometry of a periodically poled crystal.
struct CrystalSpec {
    double length = 0.0;          // m
    double poling_period = 0.0;   // m; may be +infinity for an unpoled bulk
    Axis pump_axis = Axis::X;
    Axis signal_axis = Axis::X;
    Axis idler_axis = Axis::Z;
    SellmeierSet sellmeier;

    void validate() const;  // throws std::invalid_argument
};

/// dk/domega at a reference angular frequency.
struct Slowness {
    double value = 0.0;   // s/m
    Axis axis = Axis::X;
    double omega0 = 0.0;  // rad/s
};

/// k = n(omega) * omega / c.
double wavevector(Axis axis, double omega, const SellmeierSet& set);

/// Group slowness k' = dk/domega by 5-point central differences. The step is
/// a fixed fraction of omega0, small enough that halving it moves the result
/// by less than 1e-6 relative (tested).
Slowness group_slowness(Axis axis, double omega0, const SellmeierSet& set);

/// Collinear quasi-phase-matched mismatch
///
///   dk = k_s(omega_s) + k_i(omega_i) - 2 pi / Lambda - k_p(omega_p).
///
/// The bulk part k_s + k_i - k_p follows the usual convention; the grating
/// term enters with the sign that lets a positive poling period compensate
/// the positive bulk excess of a type-II KTP interaction (first-order QPM
/// with the grating vector along the propagation direction).
double qpm_mismatch(const CrystalSpec& crystal, double omega_p, double omega_s,
                    double omega_i);

/// Poling period giving qpm_mismatch = 0 for the requested wavelengths.
/// Requires energy conservation 1/lp = 1/ls + 1/li to 1e-9 relative.
/// Throws std::domain_error if the bulk mismatch sign admits no positive
/// period.
double solve_poling_period(const SellmeierSet& set, Axis pump_axis, Axis signal_axis,
                           Axis idler_axis, double lambda_p, double lambda_s,
                           double lambda_i);

/// Pump wavelength with degenerate phase matching (lambda_s = lambda_i =
/// 2 lambda_p) for a given poling period, found by a bracketed search over
/// the validity window. The mismatch-vs-pump curve can cross zero twice; the
/// smallest root in the window is returned. Throws std::domain_error when no
/// root exists in the window.
double solve_degenerate_wavelength(const SellmeierSet& set, Axis pump_axis,
                                   Axis signal_axis, Axis idler_axis,
                                   double poling_period);

}  // namespace spdc

#endif
