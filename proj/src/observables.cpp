#include "spdckit/observables.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "spdckit/units.hpp"

namespace spdc {

namespace {

void require_normalized(const JsaMatrix& jsa, const char* who) {
    if (!jsa.normalized || std::abs(jsa.squared_norm() - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(who) + " needs a normalized JSA");
}

void require_same_axis(const GridAxis& a, const GridAxis& b, const char* who) {
    if (a.points != b.points || std::abs(a.center - b.center) > 1e-6 * a.center ||
        std::abs(a.half_span - b.half_span) > 1e-9 * a.half_span)
        throw std::invalid_argument(std::string(who) + ": grid mismatch between the two states");
}

}  // namespace

ReducedState reduced_state(const JsaMatrix& jsa, Side side) {
    require_normalized(jsa, "reduced_state");
    ReducedState st;
    if (side == Side::Signal) {
        st.axis = jsa.grid.signal;
        st.rho = jsa.amplitudes * jsa.amplitudes.adjoint();
    } else {
        st.axis = jsa.grid.idler;
        st.rho = jsa.amplitudes.transpose() * jsa.amplitudes.conjugate();
    }
    st.rho /= st.rho.trace().real();
    return st;
}

double hom_visibility(const ReducedState& a, const ReducedState& b) {
    require_same_axis(a.axis, b.axis, "hom_visibility");
    return (a.rho * b.rho).trace().real();
}

HomCurve hom_dip(const JsaMatrix& jsa_a, const JsaMatrix& jsa_b, DipKind kind,
                 const std::vector<double>& delays) {
    const ReducedState ra = reduced_state(jsa_a, Side::Signal);
    const ReducedState rb = reduced_state(
        jsa_b, kind == DipKind::SignalSignal ? Side::Signal : Side::Idler);
    require_same_axis(ra.axis, rb.axis, "hom_dip");
    const int n = ra.axis.points;
    // Tr[rho_a D rho_b D^dagger] = sum_kl rho_a(k,l) rho_b(l,k) e^{i(w_l - w_k) tau};
    // on a uniform axis, collect by frequency-difference diagonal first
    Eigen::VectorXcd diag_sums = Eigen::VectorXcd::Zero(2 * n - 1);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) diag_sums(l - k + n - 1) += ra.rho(k, l) * rb.rho(l, k);
    const double dw = ra.axis.step();
    HomCurve curve;
    curve.delays = delays;
    curve.probabilities.reserve(delays.size());
    for (double tau : delays) {
        std::complex<double> acc = 0.0;
        for (int m = -(n - 1); m <= n - 1; ++m) {
            const double phase = m * dw * tau;
            acc += diag_sums(m + n - 1) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        curve.probabilities.push_back(1.0 - acc.real());
    }
    return curve;
}

double MeasuredJsi::total() const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < intensity.rows(); ++i)
        for (Eigen::Index j = 0; j < intensity.cols(); ++j) acc += intensity(i, j);
    return acc * signal_axis.step() * idler_axis.step();
}

namespace {

/// Normalized Gaussian intensity kernel on the grid step, clipped at 5 sigma.
std::vector<double> filter_kernel(double sigma_w, double step_w) {
    const int half = std::max(1, static_cast<int>(std::ceil(5.0 * sigma_w / step_w)));
    std::vector<double> k(2 * half + 1);
    double sum = 0.0;
    for (int m = -half; m <= half; ++m) {
        const double x = m * step_w;
        k[m + half] = std::exp(-0.5 * x * x / (sigma_w * sigma_w));
        sum += k[m + half];
    }
    for (double& v : k) v /= sum;
    return k;
}

}  // namespace

MeasuredJsi simulate_jsi_measurement(const JsaMatrix& jsa, double filter_fwhm, double step) {
    require_normalized(jsa, "simulate_jsi_measurement");
    if (!(filter_fwhm > 0.0)) throw std::invalid_argument("filter FWHM must be positive");
    if (!(step > 0.0)) throw std::invalid_argument("filter step must be positive");
    MeasuredJsi out;
    if (step > filter_fwhm) {
        std::ostringstream os;
        os << "filter step " << step * 1e9 << " nm exceeds the filter FWHM " << filter_fwhm * 1e9
           << " nm; the lattice undersamples the response";
        out.warnings.push_back(os.str());
    }
    const int ns = jsa.grid.signal.points;
    const int ni = jsa.grid.idler.points;
    Eigen::MatrixXd jsi(ns, ni);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ni; ++j) jsi(i, j) = std::norm(jsa.amplitudes(i, j));

    const double lam_s0 = wavelength_from_omega(jsa.grid.signal.center);
    const double lam_i0 = wavelength_from_omega(jsa.grid.idler.center);
    const double sig_ws = sigma_from_fwhm(omega_width_from_wavelength_width(filter_fwhm, lam_s0));
    const double sig_wi = sigma_from_fwhm(omega_width_from_wavelength_width(filter_fwhm, lam_i0));

    // separable convolution with the two filters' intensity responses
    const auto ks = filter_kernel(sig_ws, jsa.grid.signal.step());
    const auto ki = filter_kernel(sig_wi, jsa.grid.idler.step());
    const int hs = static_cast<int>(ks.size() / 2);
    const int hi = static_cast<int>(ki.size() / 2);
    Eigen::MatrixXd tmp = Eigen::MatrixXd::Zero(ns, ni);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ni; ++j) {
            double acc = 0.0;
            for (int m = -hs; m <= hs; ++m) {
                const int src = i + m;
                if (src >= 0 && src < ns) acc += ks[m + hs] * jsi(src, j);
            }
            tmp(i, j) = acc;
        }
    Eigen::MatrixXd conv = Eigen::MatrixXd::Zero(ns, ni);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ni; ++j) {
            double acc = 0.0;
            for (int m = -hi; m <= hi; ++m) {
                const int src = j + m;
                if (src >= 0 && src < ni) acc += ki[m + hi] * tmp(i, src);
            }
            conv(i, j) = acc;
        }

    // filter-position lattice, uniform in omega with the requested step
    const double step_ws = omega_width_from_wavelength_width(step, lam_s0);
    const double step_wi = omega_width_from_wavelength_width(step, lam_i0);
    const auto lattice = [](const GridAxis& ax, double lat_step) {
        const int half = static_cast<int>(std::floor(ax.half_span / lat_step));
        return GridAxis{ax.center, half * lat_step, 2 * half + 1};
    };
    out.signal_axis = lattice(jsa.grid.signal, step_ws);
    out.idler_axis = lattice(jsa.grid.idler, step_wi);

    const auto sample = [](const Eigen::MatrixXd& m, const GridAxis& gs, const GridAxis& gi,
                           double ws, double wi) {
        const double fs = (ws - gs.value(0)) / gs.step();
        const double fi = (wi - gi.value(0)) / gi.step();
        const int i0 = std::clamp(static_cast<int>(std::floor(fs)), 0, gs.points - 2);
        const int j0 = std::clamp(static_cast<int>(std::floor(fi)), 0, gi.points - 2);
        const double ts = fs - i0, ti = fi - j0;
        return (1 - ts) * (1 - ti) * m(i0, j0) + ts * (1 - ti) * m(i0 + 1, j0) +
               (1 - ts) * ti * m(i0, j0 + 1) + ts * ti * m(i0 + 1, j0 + 1);
    };
    out.intensity.resize(out.signal_axis.points, out.idler_axis.points);
    for (int i = 0; i < out.signal_axis.points; ++i)
        for (int j = 0; j < out.idler_axis.points; ++j)
            out.intensity(i, j) = sample(conv, jsa.grid.signal, jsa.grid.idler,
                                         out.signal_axis.value(i), out.idler_axis.value(j));
    return out;
}

JsiFitResult fit_jsi_gaussian(const MeasuredJsi& map) {
    const int ns = map.signal_axis.points;
    const int ni = map.idler_axis.points;
    const double peak = map.intensity.maxCoeff();
    if (!(peak > 0.0)) throw std::invalid_argument("fit_jsi_gaussian: empty map");
    int above_half_s = 0, above_half_i = 0;
    for (int i = 0; i < ns; ++i)
        if ((map.intensity.row(i).array() >= 0.5 * peak).any()) ++above_half_s;
    for (int j = 0; j < ni; ++j)
        if ((map.intensity.col(j).array() >= 0.5 * peak).any()) ++above_half_i;
    if (above_half_s < 7 || above_half_i < 7)
        throw std::invalid_argument(
            "fit_jsi_gaussian: fewer than 7x7 lattice points above half maximum");

    // centroid and covariance of the intensity distribution
    double mass = 0.0, mx = 0.0, my = 0.0;
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ni; ++j) {
            const double w = map.intensity(i, j);
            mass += w;
            mx += w * map.signal_axis.value(i);
            my += w * map.idler_axis.value(j);
        }
    mx /= mass;
    my /= mass;
    double vss = 0.0, vii = 0.0, vsi = 0.0;
    for (int i = 0; i < ns; ++i) {
        const double xs = map.signal_axis.value(i) - mx;
        for (int j = 0; j < ni; ++j) {
            const double xi = map.idler_axis.value(j) - my;
            const double w = map.intensity(i, j);
            vss += w * xs * xs;
            vii += w * xi * xi;
            vsi += w * xs * xi;
        }
    }
    vss /= mass;
    vii /= mass;
    vsi /= mass;
    const double det = vss * vii - vsi * vsi;
    if (!(det > 0.0) || !(vss > 0.0) || !(vii > 0.0))
        throw std::invalid_argument("fit_jsi_gaussian: degenerate (rank-deficient) map");

    // intensity ~ exp(-1/2 x^T Sigma^-1 x) = exp(-A ds^2 - B di^2 - C ds di)
    JsiFitResult res;
    res.intensity_a = 0.5 * vii / det;
    res.intensity_b = 0.5 * vss / det;
    res.intensity_c = -vsi / det;
    res.amplitude =
        GaussianJsaCoefficients{0.5 * res.intensity_a, 0.5 * res.intensity_b,
                                0.5 * res.intensity_c};
    res.amplitude.validate();
    res.purity = std::sqrt((4.0 * res.amplitude.a * res.amplitude.b -
                            res.amplitude.c * res.amplitude.c) /
                           (4.0 * res.amplitude.a * res.amplitude.b));

    // residual against the amplitude-optimal Gaussian of the fitted shape
    double num = 0.0, den = 0.0;
    Eigen::MatrixXd model(ns, ni);
    for (int i = 0; i < ns; ++i) {
        const double xs = map.signal_axis.value(i) - mx;
        for (int j = 0; j < ni; ++j) {
            const double xi = map.idler_axis.value(j) - my;
            const double g = std::exp(-res.intensity_a * xs * xs - res.intensity_b * xi * xi -
                                      res.intensity_c * xs * xi);
            model(i, j) = g;
            num += g * map.intensity(i, j);
            den += g * g;
        }
    }
    const double a0 = num / den;
    double ss = 0.0;
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ni; ++j) {
            const double r = map.intensity(i, j) - a0 * model(i, j);
            ss += r * r;
        }
    res.rms_residual = std::sqrt(ss / (static_cast<double>(ns) * ni)) / peak;
    return res;
}

double LossBudget::total_db() const {
    double t = 0.0;
    for (const auto& [label, db] : entries) t += db;
    return t;
}

void LossBudget::validate() const {
    for (const auto& [label, db] : entries)
        if (db < 0.0)
            throw std::invalid_argument("loss budget entry '" + label + "' is negative");
}

BrightnessReport brightness_report(double pairs_per_pulse, const PumpSpec& pump,
                                   const LossBudget& budget) {
    if (pairs_per_pulse < 0.0) throw std::invalid_argument("pairs per pulse must be >= 0");
    if (!(pump.pulse_energy > 0.0)) throw std::invalid_argument("pulse energy must be positive");
    budget.validate();
    BrightnessReport r;
    r.pairs_per_pulse = pairs_per_pulse;
    r.pulse_energy = pump.pulse_energy;
    r.loss_db_per_photon = budget.total_db();
    r.single_transmission = transmission_from_db(r.loss_db_per_photon);
    r.pair_transmission = transmission_from_db(2.0 * r.loss_db_per_photon);
    r.source_pairs_per_joule = pairs_per_pulse / pump.pulse_energy;
    r.fibered_pairs_per_joule = r.source_pairs_per_joule * r.pair_transmission;
    r.heralded_singles_per_joule = r.source_pairs_per_joule * r.single_transmission;
    return r;
}

}  // namespace spdc
