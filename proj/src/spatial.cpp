#include "spdckit/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spdckit/schmidt.hpp"
#include "spdckit/units.hpp"

namespace spdc {

void BeamSpec::validate() const {
    if (!(waist > 0.0)) throw std::invalid_argument("beam waist must be positive");
    if (!(wavelength > 0.0)) throw std::invalid_argument("beam wavelength must be positive");
}

void CollectionSpec::validate() const {
    if (!(signal_waist > 0.0) || !(idler_waist > 0.0))
        throw std::invalid_argument("collection waists must be positive");
    if (transverse_points < 8 || transverse_points % 2 != 0)
        throw std::invalid_argument("transverse mode count must be even and >= 8");
}

double focusing_parameter(const BeamSpec& beam, double crystal_length) {
    beam.validate();
    if (!(crystal_length > 0.0)) throw std::invalid_argument("crystal length must be positive");
    const double z_r = 3.14159265358979323846 * beam.waist * beam.waist / beam.wavelength;
    return crystal_length / (2.0 * z_r);
}

namespace {

inline double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

/// L2-normalized Gaussian fiber mode in q space for a collection waist w.
inline double fiber_mode(double q, double w) {
    return std::pow(w * w / (2.0 * 3.14159265358979323846), 0.25) *
           std::exp(-q * q * w * w * 0.25);
}

}  // namespace

SpatialSpectralAmplitude::SpatialSpectralAmplitude(CrystalSpec crystal, PumpSpec pump,
                                                   BeamSpec pump_beam, FrequencyGrid grid,
                                                   CollectionSpec collection)
    : crystal_(std::move(crystal)),
      pump_(std::move(pump)),
      pump_beam_(std::move(pump_beam)),
      grid_(std::move(grid)),
      collection_(std::move(collection)) {
    crystal_.validate();
    pump_.validate();
    pump_beam_.validate();
    grid_.validate();
    collection_.validate();
    // span 4/w puts the mode's 1/e^2 point at half span; fewer than 8 grid
    // points across |q| <= 2/w cannot resolve the projection integrand
    const int pts = collection_.transverse_points;
    if ((pts - 1) / 2 < 8) {
        std::ostringstream os;
        os << "under-resolved transverse grid: " << pts
           << " points give fewer than 8 samples across the collection mode";
        throw std::invalid_argument(os.str());
    }
    q_signal_ = QAxis{4.0 / collection_.signal_waist, pts};
    q_idler_ = QAxis{4.0 / collection_.idler_waist, pts};
    const int ns = grid_.signal.points;
    const int ni = grid_.idler.points;
    k_signal_.resize(ns);
    k_idler_.resize(ni);
    for (int i = 0; i < ns; ++i)
        k_signal_[i] = wavevector(crystal_.signal_axis, grid_.signal.value(i), crystal_.sellmeier);
    for (int j = 0; j < ni; ++j)
        k_idler_[j] = wavevector(crystal_.idler_axis, grid_.idler.value(j), crystal_.sellmeier);
}

Eigen::MatrixXd SpatialSpectralAmplitude::raw_block(int i_s, int i_i) const {
    const double ws = grid_.signal.value(i_s);
    const double wi = grid_.idler.value(i_i);
    const double ks = k_signal_[i_s];
    const double ki = k_idler_[i_i];
    // the pump wavevector and envelope are q-independent: hoist them
    const double k_p = wavevector(crystal_.pump_axis, ws + wi, crystal_.sellmeier);
    const double grating =
        std::isinf(crystal_.poling_period) ? 0.0 : two_pi / crystal_.poling_period;
    const double base = ks + ki - grating - k_p;
    const double env = pump_envelope(pump_.shape, pump_.sigma, pump_.omega0(), ws, wi);
    const double wp2 = pump_beam_.waist * pump_beam_.waist;
    const double half_len = 0.5 * crystal_.length;
    Eigen::MatrixXd blk(q_signal_.points, q_idler_.points);
    for (int a = 0; a < q_signal_.points; ++a) {
        const double qs = q_signal_.value(a);
        const double kin_s = qs * qs / (2.0 * ks);
        for (int b = 0; b < q_idler_.points; ++b) {
            const double qi = q_idler_.value(b);
            const double qp = qs + qi;
            const double dkz = base - kin_s - qi * qi / (2.0 * ki) + qp * qp / (2.0 * k_p);
            blk(a, b) = env * std::exp(-qp * qp * wp2 * 0.25) * sinc(half_len * dkz);
        }
    }
    return blk;
}

double SpatialSpectralAmplitude::raw_squared_norm() const {
    if (norm_cache_ > 0.0) return norm_cache_;
    const int ns = grid_.signal.points;
    const int ni = grid_.idler.points;
    std::vector<double> row_sums(ns, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < ns; ++i) {
        double acc = 0.0;
        for (int j = 0; j < ni; ++j) acc += raw_block(i, j).squaredNorm();
        row_sums[i] = acc;
    }
    double total = 0.0;
    for (int i = 0; i < ns; ++i) total += row_sums[i];  // fixed order
    norm_cache_ = total * grid_.signal.step() * grid_.idler.step() * q_signal_.step() *
                  q_idler_.step();
    return norm_cache_;
}

Eigen::MatrixXd SpatialSpectralAmplitude::block(int i_s, int i_i) const {
    return raw_block(i_s, i_i) / std::sqrt(raw_squared_norm());
}

SpatialSpectralAmplitude build_spatial_jsa(const CrystalSpec& crystal, const PumpSpec& pump,
                                           const BeamSpec& pump_beam,
                                           const FrequencyGrid& grid,
                                           const CollectionSpec& collection) {
    return SpatialSpectralAmplitude(crystal, pump, pump_beam, grid, collection);
}

struct FiberProjection {
    /// Double projection of the SSA onto its collection-grid fiber modes;
    /// unnormalized amplitudes (the caller renormalizes the JSA).
    static Eigen::MatrixXd projected_amplitude(const SpatialSpectralAmplitude& ssa,
                                               const CollectionSpec& col) {
        const FrequencyGrid& grid = ssa.grid();
        const int ns = grid.signal.points;
        const int ni = grid.idler.points;
        const QAxis& qs_ax = ssa.q_signal();
        const QAxis& qi_ax = ssa.q_idler();
        if (4.0 / col.signal_waist > qs_ax.half_span * (1.0 + 1e-12) ||
            4.0 / col.idler_waist > qi_ax.half_span * (1.0 + 1e-12))
            throw std::invalid_argument(
                "projection waist narrower than the built transverse grid supports");
        Eigen::VectorXd us(qs_ax.points), ui(qi_ax.points);
        for (int a = 0; a < qs_ax.points; ++a)
            us(a) = fiber_mode(qs_ax.value(a), col.signal_waist);
        for (int b = 0; b < qi_ax.points; ++b)
            ui(b) = fiber_mode(qi_ax.value(b), col.idler_waist);
        const double dq = qs_ax.step() * qi_ax.step();
        Eigen::MatrixXd F(ns, ni);
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < ns; ++i) {
            for (int j = 0; j < ni; ++j) F(i, j) = us.dot(ssa.raw_block(i, j) * ui) * dq;
        }
        return F;
    }

    /// Efficiencies against the full emission cone, resolved on a wide
    /// internal grid reaching the fourth transverse phase-matching zero.
    static CouplingReport couplings(const SpatialSpectralAmplitude& ssa,
                                    const CollectionSpec& col) {
        const CrystalSpec& crystal = ssa.crystal();
        const FrequencyGrid& grid = ssa.grid();
        const int ns = grid.signal.points;
        const int ni = grid.idler.points;
        const double ks0 = wavevector(crystal.signal_axis, grid.signal.center, crystal.sellmeier);
        const double ki0 = wavevector(crystal.idler_axis, grid.idler.center, crystal.sellmeier);
        const double kp0 = wavevector(crystal.pump_axis,
                                      grid.signal.center + grid.idler.center, crystal.sellmeier);
        const double kin_coef_s = 0.5 / ks0 - 0.5 / kp0;
        const double kin_coef_i = 0.5 / ki0 - 0.5 / kp0;
        const double four_zeros = 8.0 * two_pi / crystal.length;  // kin q^2 L/2 = 4 pi
        const double span_s = std::sqrt(four_zeros / (2.0 * std::max(kin_coef_s, 1e-30)));
        const double span_i = std::sqrt(four_zeros / (2.0 * std::max(kin_coef_i, 1e-30)));
        const double dq_target = 0.25 * std::min({2.0 / col.signal_waist, 2.0 / col.idler_waist,
                                                  2.0 / ssa.pump_beam().waist});
        auto make_axis = [&](double span) {
            int pts = static_cast<int>(std::ceil(2.0 * span / dq_target)) + 1;
            pts = std::clamp(pts, 64, 384);
            return QAxis{span, pts};
        };
        const QAxis qs_ax = make_axis(span_s);
        const QAxis qi_ax = make_axis(span_i);

        Eigen::VectorXd us(qs_ax.points), ui(qi_ax.points);
        for (int a = 0; a < qs_ax.points; ++a)
            us(a) = fiber_mode(qs_ax.value(a), col.signal_waist);
        for (int b = 0; b < qi_ax.points; ++b)
            ui(b) = fiber_mode(qi_ax.value(b), col.idler_waist);
        const double dqs = qs_ax.step();
        const double dqi = qi_ax.step();

        const double grating =
            std::isinf(crystal.poling_period) ? 0.0 : two_pi / crystal.poling_period;
        const double wp2 = ssa.pump_beam().waist * ssa.pump_beam().waist;
        const double half_len = 0.5 * crystal.length;
        std::vector<double> norm_rows(ns, 0.0), na_i_rows(ns, 0.0), na_s_rows(ns, 0.0),
            pair_rows(ns, 0.0);
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < ns; ++i) {
            const double ws = grid.signal.value(i);
            const double ks = wavevector(crystal.signal_axis, ws, crystal.sellmeier);
            Eigen::MatrixXd T(qs_ax.points, qi_ax.points);
            double norm_acc = 0.0, nai_acc = 0.0, nas_acc = 0.0, pair_acc = 0.0;
            for (int j = 0; j < ni; ++j) {
                const double wi = grid.idler.value(j);
                const double ki = wavevector(crystal.idler_axis, wi, crystal.sellmeier);
                const double kp =
                    wavevector(crystal.pump_axis, ws + wi, crystal.sellmeier);
                const double base =
                    ks + ki - grating - kp;
                const double env = pump_envelope(ssa.pump().shape, ssa.pump().sigma,
                                                 ssa.pump().omega0(), ws, wi);
                for (int a = 0; a < qs_ax.points; ++a) {
                    const double qs = qs_ax.value(a);
                    const double kin_s = qs * qs / (2.0 * ks);
                    for (int b = 0; b < qi_ax.points; ++b) {
                        const double qi = qi_ax.value(b);
                        const double qp = qs + qi;
                        const double dkz =
                            base - kin_s - qi * qi / (2.0 * ki) + qp * qp / (2.0 * kp);
                        T(a, b) =
                            env * std::exp(-qp * qp * wp2 * 0.25) * sinc(half_len * dkz);
                    }
                }
                norm_acc += T.squaredNorm() * dqs * dqi;
                const Eigen::VectorXd proj_i = (T * ui) * dqi;        // f(q_s)
                const Eigen::VectorXd proj_s = (T.transpose() * us) * dqs;  // f(q_i)
                nai_acc += proj_i.squaredNorm() * dqs;
                nas_acc += proj_s.squaredNorm() * dqi;
                const double both = us.dot(proj_i) * dqs;
                pair_acc += both * both;
            }
            norm_rows[i] = norm_acc;
            na_i_rows[i] = nai_acc;
            na_s_rows[i] = nas_acc;
            pair_rows[i] = pair_acc;
        }
        double norm4 = 0.0, na_i = 0.0, na_s = 0.0, pair_num = 0.0;
        for (int i = 0; i < ns; ++i) {
            norm4 += norm_rows[i];
            na_i += na_i_rows[i];
            na_s += na_s_rows[i];
            pair_num += pair_rows[i];
        }
        CouplingReport r;
        r.pair_1d = pair_num / norm4;
        r.heralded_signal_1d = pair_num / na_i;
        r.heralded_idler_1d = pair_num / na_s;
        r.pair = r.pair_1d * r.pair_1d;
        r.heralded_signal = r.heralded_signal_1d * r.heralded_signal_1d;
        r.heralded_idler = r.heralded_idler_1d * r.heralded_idler_1d;
        return r;
    }

    /// Purity of the signal's (omega, q) reduced state with the idler
    /// projected onto its collection mode. The constant tensor normalization
    /// cancels in Tr[G^2]/Tr[G]^2, so raw blocks suffice.
    static double heralded_signal_purity(const SpatialSpectralAmplitude& ssa) {
        const FrequencyGrid& grid = ssa.grid();
        const int ns = grid.signal.points;
        const int ni = grid.idler.points;
        const QAxis& qs_ax = ssa.q_signal();
        const QAxis& qi_ax = ssa.q_idler();
        Eigen::VectorXd ui(qi_ax.points);
        for (int b = 0; b < qi_ax.points; ++b)
            ui(b) = fiber_mode(qi_ax.value(b), ssa.collection().idler_waist);
        // A[(omega_s, q_s), omega_i]: idler projected onto its fiber mode
        Eigen::MatrixXd A(ns * qs_ax.points, ni);
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < ns; ++i) {
            for (int j = 0; j < ni; ++j)
                A.block(i * qs_ax.points, j, qs_ax.points, 1) =
                    ssa.raw_block(i, j) * ui * qi_ax.step();
        }
        const Eigen::MatrixXd G = A.transpose() * A;  // omega_i x omega_i Gram matrix
        const double tr = G.trace();
        return G.squaredNorm() / (tr * tr);
    }
};

std::pair<JsaMatrix, CouplingReport> project_to_fiber(const SpatialSpectralAmplitude& ssa,
                                                      const CollectionSpec& collection) {
    collection.validate();
    const Eigen::MatrixXd F = FiberProjection::projected_amplitude(ssa, collection);
    JsaMatrix jsa;
    jsa.grid = ssa.grid();
    jsa.amplitudes = F.cwiseAbs().cast<std::complex<double>>();
    jsa.normalize();
    return {std::move(jsa), FiberProjection::couplings(ssa, collection)};
}

JsaMatrix spatially_filtered_jsa(const CrystalSpec& crystal, const PumpSpec& pump,
                                 const BeamSpec& pump_beam, const FrequencyGrid& grid,
                                 const CollectionSpec& collection) {
    const SpatialSpectralAmplitude ssa(crystal, pump, pump_beam, grid, collection);
    const Eigen::MatrixXd F = FiberProjection::projected_amplitude(ssa, collection);
    JsaMatrix jsa;
    jsa.grid = grid;
    jsa.amplitudes = F.cwiseAbs().cast<std::complex<double>>();
    jsa.normalize();
    return jsa;
}

double signal_spatial_spectral_purity(const SpatialSpectralAmplitude& ssa) {
    return FiberProjection::heralded_signal_purity(ssa);
}

std::vector<WaistScanRow> purity_vs_waist_scan(const CrystalSpec& crystal,
                                               const PumpSpec& pump,
                                               const BeamSpec& pump_beam,
                                               const FrequencyGrid& grid,
                                               const CollectionSpec& collection_template,
                                               const std::vector<double>& waists) {
    if (waists.empty()) throw std::invalid_argument("waist list must not be empty");
    std::vector<WaistScanRow> rows;
    rows.reserve(waists.size());
    for (double w : waists) {
        CollectionSpec col = collection_template;
        col.signal_waist = w;
        col.idler_waist = w;
        const SpatialSpectralAmplitude ssa(crystal, pump, pump_beam, grid, col);
        auto [jsa, coupling] = project_to_fiber(ssa, col);
        WaistScanRow row;
        row.waist = w;
        row.spectral_purity = schmidt_decompose(jsa).purity;
        row.spatial_spectral_purity = signal_spatial_spectral_purity(ssa);
        row.pair_coupling = coupling.pair;
        row.heralded_signal = coupling.heralded_signal;
        row.heralded_idler = coupling.heralded_idler;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace spdc
