#include "phasesym/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "phasesym/error.hpp"
#include "phasesym/symmetry.hpp"

namespace phasesym {

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

} // namespace

FrequencyEstimate dominant_frequency(const std::vector<double>& series, double dt, const FrequencyOptions& opts) {
    if (!(dt > 0.0)) throw ValidationError("dominant_frequency: dt must be positive");
    if (!(opts.transient_fraction >= 0.0 && opts.transient_fraction < 1.0))
        throw ValidationError("dominant_frequency: transient_fraction must lie in [0, 1)");
    const auto skip = std::size_t(std::floor(opts.transient_fraction * double(series.size())));
    const std::size_t n = series.size() - skip;
    if (n < opts.min_samples)
        throw ValidationError("dominant_frequency: " + std::to_string(n) + " samples after transient discard, need " +
                              std::to_string(opts.min_samples));

    FrequencyEstimate est;
    est.resolution = 2.0 * std::numbers::pi / (double(n) * dt);

    double mean = 0.0, peak_abs = 0.0;
    for (std::size_t i = skip; i < series.size(); ++i) {
        if (!std::isfinite(series[i])) throw NumericalError("dominant_frequency: series has non-finite samples");
        mean += series[i];
        peak_abs = std::max(peak_abs, std::abs(series[i]));
    }
    mean /= double(n);
    const double reference = std::max(std::abs(mean), peak_abs);
    if (reference == 0.0) return est;

    if (opts.zero_padding < 1) throw ValidationError("dominant_frequency: zero_padding must be >= 1");
    const std::size_t m = n * opts.zero_padding;
    double* in = fftw_alloc_real(m);
    fftw_complex* out = fftw_alloc_complex(m / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(int(m), in, out, FFTW_ESTIMATE);
    }
    double window_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(n - 1));
        window_sum += w;
        in[i] = (series[skip + i] - mean) * w;
    }
    std::fill(in + n, in + m, 0.0);
    fftw_execute(plan);
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t k = opts.zero_padding; k <= m / 2; ++k) {
        const double mag = std::hypot(out[k][0], out[k][1]);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);

    const double absolute = 2.0 * best_mag / window_sum;
    est.peak_amplitude = absolute / reference;
    if (est.peak_amplitude < opts.dc_threshold || absolute < opts.amplitude_floor) return est;
    est.stationary = false;
    est.omega_tilde = double(best) * est.resolution / double(opts.zero_padding);
    return est;
}

// ---- critical drive ---------------------------------------------------------

DriveProbe classify_drive(const ModelParams& p, const MeanFieldState2S& init, double eta,
                          const ClassifierSettings& settings) {
    ModelParams q = p;
    q.eta = eta;
    const Trajectory traj = mf_evolve(init, q, settings.t_final, settings.samples, settings.meanfield);
    DriveProbe probe;
    probe.eta = eta;
    probe.a = dominant_frequency(traj.real_series("sz_A"), traj.dt(), settings.frequency);
    probe.b = dominant_frequency(traj.real_series("sz_B"), traj.dt(), settings.frequency);
    return probe;
}

CriticalDriveResult critical_drive(double phi, const ModelParams& p, const MeanFieldState2S& init,
                                   std::pair<double, double> eta_bracket, double tol,
                                   const ClassifierSettings& settings) {
    if (!(tol > 0.0)) throw ValidationError("critical_drive: tolerance must be positive");
    double lo = eta_bracket.first, hi = eta_bracket.second;
    if (!(lo < hi)) throw ValidationError("critical_drive: bracket must satisfy lo < hi");
    ModelParams q = p;
    q.phi = phi;
    CriticalDriveResult result;
    result.probes.push_back(classify_drive(q, init, lo, settings));
    result.probes.push_back(classify_drive(q, init, hi, settings));
    if (result.probes[0].nonstationary() || !result.probes[1].nonstationary())
        throw ValidationError("critical_drive: bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "] does not straddle a stationary/non-stationary transition at phi = " +
                              std::to_string(phi));
    while (hi - lo >= tol) {
        const double mid = 0.5 * (lo + hi);
        result.probes.push_back(classify_drive(q, init, mid, settings));
        (result.probes.back().nonstationary() ? hi : lo) = mid;
    }
    result.eta_c = 0.5 * (lo + hi);
    return result;
}

// ---- spectra ------------------------------------------------------------------

std::vector<DfsMode> dfs_detect(const SpectrumResult& spec, double delta, const DfsCriteria& criteria) {
    std::vector<DfsMode> out;
    if (delta == 0.0) return out;
    const double target = std::abs(delta);
    for (const Complex& z : spec.eigenvalues) {
        const double off = std::abs(std::abs(z.imag()) - target);
        if (std::abs(z.real()) < criteria.re_tolerance && off < criteria.im_tolerance)
            out.push_back({z, DfsClass::Dfs});
        else if (off < criteria.candidate_window)
            out.push_back({z, DfsClass::EdfsCandidate});
    }
    return out;
}

std::size_t count_dfs_pairs(const std::vector<DfsMode>& modes) {
    std::size_t up = 0, down = 0;
    for (const auto& m : modes) {
        if (m.classification != DfsClass::Dfs) continue;
        (m.eigenvalue.imag() > 0 ? up : down)++;
    }
    return std::min(up, down);
}

Complex mode_amplitude(const SpectrumResult& spec, const ComplexMatrix& rho0, const ComplexMatrix& observable,
                       std::size_t mode_index) {
    if (!spec.has_modes()) throw ValidationError("mode_amplitude: spectrum was computed without modes");
    if (mode_index >= spec.right_modes.size())
        throw ValidationError("mode_amplitude: mode index " + std::to_string(mode_index) + " out of range");
    const ComplexMatrix& nu = spec.right_modes[mode_index];
    const ComplexMatrix& mu = spec.left_modes[mode_index];
    if (rho0.rows() != nu.rows() || observable.rows() != nu.rows())
        throw DimensionError("mode_amplitude: state or observable does not match the mode dimension");
    return (mu.adjoint() * rho0).trace() * (observable * nu).trace();
}

double min_gap_near(const SpectrumResult& spec, double delta, double resolution) {
    double best = kNaN;
    for (const Complex& z : spec.eigenvalues) {
        if (std::abs(std::abs(z.imag()) - std::abs(delta)) >= resolution) continue;
        const double re = std::abs(z.real());
        if (std::isnan(best) || re < best) best = re;
    }
    return best;
}

// ---- sweeps -------------------------------------------------------------------

std::vector<double> Grid::values() const {
    if (count == 0) throw ValidationError("grid count must be at least 1");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw ValidationError("grid bounds must be finite");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = start;
        return v;
    }
    for (std::size_t k = 0; k < count; ++k) v[k] = start + (stop - start) * double(k) / double(count - 1);
    v.back() = stop;
    return v;
}

std::string sweep_type_name(const SweepSpec& spec) {
    static const char* names[] = {"eta-phi-map", "weight-vs-phi", "initial-state-map", "dfs-map", "gap-scaling"};
    return names[spec.index()];
}

namespace {

using PointFn = std::function<std::vector<double>(const std::vector<double>& coords)>;

SweepResult run_grid(std::string type, std::vector<SweepAxis> axes, std::vector<std::string> value_names,
                     const PointFn& fn, const SweepRunOptions& run) {
    SweepResult r;
    r.type = std::move(type);
    r.axes = std::move(axes);
    r.value_names = std::move(value_names);
    std::size_t total = 1;
    for (const auto& a : r.axes) total *= a.values.size();
    r.points.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        std::vector<double> coords(r.axes.size());
        for (std::size_t ax = r.axes.size(); ax-- > 0;) {
            const std::size_t len = r.axes[ax].values.size();
            coords[ax] = r.axes[ax].values[rem % len];
            rem /= len;
        }
        r.points[idx].coords = std::move(coords);
    }
    const std::size_t width = r.value_names.size();
    kernels::for_each_index(
        total,
        [&](std::size_t idx) {
            SweepPoint& pt = r.points[idx];
            try {
                pt.values = fn(pt.coords);
                if (pt.values.size() != width) throw NumericalError("sweep point returned the wrong number of values");
            } catch (const std::exception& e) {
                pt.ok = false;
                pt.error = e.what();
                pt.values.assign(width, kNaN);
            }
        },
        run.exec, run.jobs);
    return r;
}

double window_mean(const std::vector<double>& a, const std::vector<double>& b, double transient_fraction) {
    const auto skip = std::size_t(std::floor(transient_fraction * double(a.size())));
    double sum = 0.0;
    for (std::size_t i = skip; i < a.size(); ++i) sum += a[i] + b[i];
    return sum / double(a.size() - skip);
}

SweepResult run(const EtaPhiMapSpec& s, const SweepRunOptions& opts) {
    const double g = s.base.g;
    if (!(g > 0.0)) throw ValidationError("eta-phi-map needs g > 0");
    validate_state(s.init);
    const bool two_species = kind_of(s.init) == MeanFieldKind::TwoSpecies;
    std::vector<std::string> names =
        two_species ? std::vector<std::string>{"omega_tilde", "omega_tilde_B", "peak_amplitude", "magnetization",
                                               "nonstationary"}
                    : std::vector<std::string>{"omega_tilde_NB", "omega_tilde_NA", "peak_amplitude", "mean_N_B",
                                               "nonstationary"};
    return run_grid(
        "eta-phi-map", {{"phi", s.phi.values()}, {"eta", s.eta_over_g.values()}}, std::move(names),
        [&](const std::vector<double>& c) {
            ModelParams p = s.base;
            p.phi = c[0];
            p.eta = c[1] * g;
            const Trajectory traj = mf_evolve(s.init, p, s.settings.t_final, s.settings.samples, s.settings.meanfield);
            const auto& freq = s.settings.frequency;
            if (two_species) {
                const auto za = traj.real_series("sz_A"), zb = traj.real_series("sz_B");
                const FrequencyEstimate fa = dominant_frequency(za, traj.dt(), freq);
                const FrequencyEstimate fb = dominant_frequency(zb, traj.dt(), freq);
                return std::vector<double>{fa.omega_tilde / g, fb.omega_tilde / g, fa.peak_amplitude,
                                           window_mean(za, zb, freq.transient_fraction), fa.stationary ? 0.0 : 1.0};
            }
            const auto nb = traj.real_series("N_B"), na = traj.real_series("N_A");
            const FrequencyEstimate fb = dominant_frequency(nb, traj.dt(), freq);
            const FrequencyEstimate fa = dominant_frequency(na, traj.dt(), freq);
            const std::vector<double> zeros(nb.size(), 0.0);
            const double w = fb.omega_tilde / g;
            return std::vector<double>{w, fa.omega_tilde / g, fb.peak_amplitude,
                                       window_mean(nb, zeros, freq.transient_fraction),
                                       w >= s.nonstationary_threshold ? 1.0 : 0.0};
        },
        opts);
}

SweepResult run(const WeightVsPhiSpec& s, const SweepRunOptions& opts) {
    ModelParams p;
    p.set_two_species_total(s.n_total);
    const HilbertSpace space = s.full_space ? HilbertSpace::two_species_full(p.n_a, p.n_b)
                                            : HilbertSpace::two_species_collective(p.n_a, p.n_b);
    const ComplexVector psi = plus_x_product(space);
    return run_grid(
        "weight-vs-phi", {{"phi", s.phi.values()}}, {"w_max", "complement"},
        [&](const std::vector<double>& c) {
            const WeightReport w = sector_weights(psi, casimir_sectors(space, c[0]));
            return std::vector<double>{w.w_max, w.complement};
        },
        opts);
}

SweepResult run(const InitialStateMapSpec& s, const SweepRunOptions& opts) {
    const double g = s.base.g;
    if (!(g > 0.0)) throw ValidationError("initial-state-map needs g > 0");
    return run_grid(
        "initial-state-map", {{"c_plus", s.c_plus.values()}, {"c_minus", s.c_minus.values()}},
        {"omega_tilde_NB", "peak_amplitude", "nonstationary"},
        [&](const std::vector<double>& c) {
            const MeanFieldState3L init = three_level_initial_expectations(c[0], c[1], s.phi_state, s.mapping);
            const Trajectory traj = mf_evolve(init, s.base, s.settings.t_final, s.settings.samples, s.settings.meanfield);
            const FrequencyEstimate f = dominant_frequency(traj.real_series("N_B"), traj.dt(), s.settings.frequency);
            const double w = f.omega_tilde / g;
            return std::vector<double>{w, f.peak_amplitude, w >= s.nonstationary_threshold ? 1.0 : 0.0};
        },
        opts);
}

SweepResult run(const DfsMapSpec& s, const SweepRunOptions& opts) {
    const double g = s.base.g;
    return run_grid(
        "dfs-map", {{"eta", s.eta_over_g.values()}, {"delta", s.delta_over_g.values()}},
        {"dfs_pairs", "edfs_candidates", "min_candidate_gap"},
        [&](const std::vector<double>& c) {
            ModelParams p = s.base;
            p.eta = c[0] * g;
            p.delta_a = c[1] * g;
            p.delta_b = s.antisymmetric_detuning ? -c[1] * g : c[1] * g;
            BuildOptions b;
            b.full_space = s.full_space;
            const SpectrumResult spec = spectrum(build_model(s.kind, p, b), false, s.budget);
            const auto modes = dfs_detect(spec, p.delta_a);
            double candidates = 0.0, gap = kNaN;
            for (const auto& m : modes) {
                if (m.classification != DfsClass::EdfsCandidate) continue;
                candidates += 1.0;
                const double re = std::abs(m.eigenvalue.real());
                if (std::isnan(gap) || re < gap) gap = re;
            }
            return std::vector<double>{double(count_dfs_pairs(modes)), candidates, gap};
        },
        opts);
}

SweepResult run(const GapScalingSpec& s, const SweepRunOptions&) {
    // each point holds a d^2 x d^2 dense superoperator; run them one at a time
    const SweepRunOptions serial{kernels::Exec::Serial, 1};
    std::vector<double> ns;
    for (int n : s.n_list) {
        if (n < 1) throw ValidationError("gap-scaling: atom counts must be >= 1");
        ns.push_back(double(n));
    }
    const double delta = std::abs(s.base.delta_a);
    if (delta == 0.0) throw ValidationError("gap-scaling needs a nonzero detuning");
    return run_grid(
        "gap-scaling", {{"N", ns}}, {"min_re_gap"},
        [&](const std::vector<double>& c) {
            ModelParams p = s.base;
            p.n_atoms = int(c[0]);
            p.delta_a = delta;
            p.delta_b = -delta;
            const SpectrumResult spec = spectrum(build_model(ModelKind::ThreeLevelEffective, p), false, s.budget);
            return std::vector<double>{min_gap_near(spec, delta, s.resolution)};
        },
        serial);
}

} // namespace

SweepResult sweep(const SweepSpec& spec, const SweepRunOptions& run_opts) {
    return std::visit([&](const auto& s) { return run(s, run_opts); }, spec);
}

} // namespace phasesym
