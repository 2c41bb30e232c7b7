// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance [A1 A7 ...]   (no arguments runs everything)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "phasesym/analysis.hpp"
#include "phasesym/error.hpp"
#include "phasesym/lindblad.hpp"
#include "phasesym/meanfield.hpp"
#include "phasesym/models.hpp"
#include "phasesym/symmetry.hpp"

using namespace phasesym;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kG = 0.1;
constexpr std::size_t kPadding = 32;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

MeanFieldState2S x_polarized() {
    MeanFieldState2S s;
    s.sa = Eigen::Vector3d(1.0, 0.0, 0.0);
    s.sb = Eigen::Vector3d(1.0, 0.0, 0.0);
    return s;
}

ModelParams base_params() {
    ModelParams p;
    p.g = kG;
    p.kappa = 1.0;
    return p;
}

ComplexVector product(const ComplexVector& site, int n) {
    ComplexVector v = ComplexVector::Ones(1);
    for (int k = 0; k < n; ++k) v = kron(v, site);
    return v;
}

ComplexMatrix pure(const ComplexVector& psi) { return psi * psi.adjoint(); }

// ---- A1, A2, A14 ------------------------------------------------------------

std::vector<DriveProbe> threshold_probes; // filled by A1 and A2, checked by A14
double eta_c_zero = std::numeric_limits<double>::quiet_NaN();

CriticalDriveResult threshold_at(double phi) {
    const auto r = critical_drive(phi, base_params(), x_polarized(), {1e-3 * kG, 1.5 * kG}, 2e-3 * kG,
                                  ClassifierSettings{});
    threshold_probes.insert(threshold_probes.end(), r.probes.begin(), r.probes.end());
    return r;
}

Outcome a1() {
    const double eta_c = threshold_at(0.0).eta_c;
    eta_c_zero = eta_c;
    const double rel = std::abs(eta_c / kG - 1.0);
    return {rel < 0.05, fmt("eta_c(0)/g = %.4f, |eta_c/g - 1| = %.4f (tol 0.05)", eta_c / kG, rel)};
}

Outcome a2() {
    if (std::isnan(eta_c_zero)) eta_c_zero = threshold_at(0.0).eta_c;
    const double half = threshold_at(kPi / 2).eta_c;
    const double three_quarter = threshold_at(3 * kPi / 4).eta_c;
    const double near_pi = threshold_at(0.95 * kPi).eta_c;
    const bool ordered = three_quarter < half && half < eta_c_zero;
    const bool vanishing = near_pi < 0.3 * eta_c_zero;
    return {ordered && vanishing,
            fmt("eta_c/g at phi = 0, pi/2, 3pi/4, 0.95pi: %.4f %.4f %.4f %.4f; ordered %d, ratio(0.95pi) = %.3f "
                "(need < 0.3)",
                eta_c_zero / kG, half / kG, three_quarter / kG, near_pi / kG, int(ordered), near_pi / eta_c_zero)};
}

Outcome a14() {
    if (threshold_probes.empty()) {
        a1();
        a2();
    }
    std::size_t tested = 0, locked = 0;
    double worst = 0.0;
    for (const auto& p : threshold_probes) {
        if (!p.a.stationary || !p.b.stationary) {
            ++tested;
            const double gap = std::abs(p.a.omega_tilde - p.b.omega_tilde);
            worst = std::max(worst, gap / p.a.resolution);
            if (!p.a.stationary && !p.b.stationary && gap <= p.a.resolution) ++locked;
        }
    }
    return {tested > 0 && locked == tested,
            fmt("%zu non-stationary probes, %zu locked; worst |w_A - w_B| = %.3f bins", tested, locked, worst)};
}

// ---- A3 ---------------------------------------------------------------------

// Two-atom Casimir built from Pauli matrices, basis (down, up) per atom.
double two_atom_weight(double phi) {
    ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix s = kron(lower, id) + std::polar(1.0, -phi) * kron(id, lower);
    const ComplexMatrix sd = s.adjoint();
    const ComplexMatrix sz = (sd * s - s * sd) / 2.0;
    const ComplexMatrix casimir = (s * sd + sd * s) / 2.0 + sz * sz;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(casimir);
    ComplexVector plus(2);
    plus << 1.0, 1.0;
    const ComplexVector psi = kron(plus, plus) / 2.0;
    const double top = es.eigenvalues().maxCoeff();
    double w = 0.0;
    for (Eigen::Index k = 0; k < 4; ++k)
        if (std::abs(es.eigenvalues()(k) - top) < 1e-9) w += std::norm(es.eigenvectors().col(k).dot(psi));
    return w;
}

double collective_weight(int n, double phi) {
    const HilbertSpace space = HilbertSpace::two_species_collective(n / 2, n / 2);
    return sector_weights(plus_x_product(space), casimir_sectors(space, phi)).w_max;
}

Outcome a3() {
    bool ok = true;
    std::ostringstream d;
    for (int n : {4, 8}) {
        const double w0 = collective_weight(n, 0.0);
        const double wh = collective_weight(n, kPi / 2);
        const double wp = collective_weight(n, kPi);
        ok = ok && std::abs(w0 - 1.0) <= 1e-10 && wp < wh && wh < w0;
        d << fmt("N=%d w(0)-1=%.1e w(pi/2)=%.6f w(pi)=%.6f; ", n, w0 - 1.0, wh, wp);
    }
    const HilbertSpace two = HilbertSpace::two_species_full(1, 1);
    const double w2 = sector_weights(plus_x_product(two), casimir_sectors(two, kPi)).w_max;
    const double oracle = two_atom_weight(kPi);
    ok = ok && std::abs(w2 - 0.5) <= 1e-10 && std::abs(w2 - oracle) <= 1e-10;
    d << fmt("N=2 w(pi)=%.12f oracle=%.12f", w2, oracle);
    return {ok, d.str()};
}

// ---- A4 ---------------------------------------------------------------------

double max_residual(const SymmetryResiduals& r) {
    double m = r.h_residual;
    for (double j : r.jump_residuals) m = std::max(m, j);
    return m;
}

Outcome a4() {
    double worst_spin = 0.0, worst_three = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double phi = -kPi + 2 * kPi * k / 16.0;
        ModelParams p = base_params();
        p.phi = phi;
        p.eta = 0.6 * kG;
        p.n_a = 2;
        p.n_b = 2;
        p.delta_a = p.delta_b = 0.05;
        const LindbladModel spin = build_model(ModelKind::SpinOnly, p);
        worst_spin = std::max(worst_spin, max_residual(symmetry_residuals(spin, symmetry_operator(spin, phi))));
        p.n_atoms = 2;
        const LindbladModel three = build_model(ModelKind::ThreeLevelEffective, p);
        worst_three = std::max(worst_three, max_residual(symmetry_residuals(three, symmetry_operator(three, phi))));
    }
    ModelParams q = base_params();
    q.phi = kPi / 3;
    q.eta = 0.6 * kG;
    q.n_atoms = 2;
    q.delta_a = 0.05;
    q.delta_b = -0.05;
    const LindbladModel broken = build_model(ModelKind::ThreeLevelEffective, q);
    const double h_broken = symmetry_residuals(broken, symmetry_operator(broken, q.phi)).h_residual;
    return {worst_spin < 1e-10 && worst_three < 1e-10 && h_broken > 1e-6,
            fmt("max residual spin-only S^2_phi %.2e, three-level T^phi %.2e (16 phi values, tol 1e-10); "
                "H residual at delta_A = -delta_B: %.3e (need > 1e-6)",
                worst_spin, worst_three, h_broken)};
}

// ---- A5 ---------------------------------------------------------------------

Outcome a5() {
    ModelParams p = base_params();
    p.n_a = p.n_b = 4;
    p.eta = 0.6 * kG;
    p.phi = kPi / 3;
    const LindbladModel model = build_model(ModelKind::SpinOnly, p);
    const SectorDecomposition sectors = casimir_sectors(model.space, p.phi);
    const ComplexMatrix rho0 = pure(plus_x_product(model.space));
    EvolveOptions opts;
    opts.integrator.rtol = 1e-10;
    opts.integrator.atol = 1e-12;
    opts.keep_snapshots = true;
    const Trajectory traj = evolve_density_matrix(model, rho0, 100.0, 201, opts);
    const WeightReport w0 = sector_weights(rho0, sectors);
    double drift = 0.0;
    for (const auto& snap : traj.snapshots) {
        const WeightReport w = sector_weights(snap.rho, sectors);
        for (std::size_t s = 0; s < w.weights.size(); ++s)
            drift = std::max(drift, std::abs(w.weights[s].second - w0.weights[s].second));
    }
    // sanity: the state itself moves
    double motion = 0.0;
    for (const auto& snap : traj.snapshots) motion = std::max(motion, max_abs(snap.rho - rho0));
    return {drift < 1e-6 && !traj.snapshots.empty(),
            fmt("%zu sectors, %zu snapshots, max weight drift %.2e (tol 1e-6), max |rho(t) - rho0| %.3f",
                sectors.labels.size(), traj.snapshots.size(), drift, motion)};
}

// ---- A6 ---------------------------------------------------------------------

struct ImaginaryPairs {
    std::size_t pairs = 0;
    double nearest_distance = std::numeric_limits<double>::infinity(); // |nearest - i target|
    Complex nearest;
};

// Eigenvalue pairs with |Re| < 1e-8 and Im = +-target within 1e-8; target = 0
// counts any purely imaginary eigenvalue with |Im| > 1e-8.
ImaginaryPairs imaginary_pairs(const SpectrumResult& spec, double target) {
    ImaginaryPairs out;
    std::size_t upper = 0, lower = 0;
    for (const Complex& z : spec.eigenvalues) {
        if (target > 0.0 && z.imag() > 0.0 && std::abs(z - Complex(0.0, target)) < out.nearest_distance) {
            out.nearest_distance = std::abs(z - Complex(0.0, target));
            out.nearest = z;
        }
        const bool on_line = target > 0.0 ? std::abs(std::abs(z.imag()) - target) < 1e-8 : std::abs(z.imag()) > 1e-8;
        if (!on_line) continue;
        if (std::abs(z.real()) < 1e-8) (z.imag() > 0 ? upper : lower)++;
    }
    out.pairs = std::min(upper, lower);
    if (upper != lower) out.pairs = std::numeric_limits<std::size_t>::max();
    return out;
}

Outcome a6() {
    ModelParams p = base_params();
    p.n_a = p.n_b = 3;
    p.eta = 0.025;
    p.delta_a = p.delta_b = 0.1 * kG;
    BuildOptions build;
    build.full_space = true;
    build.budget.max_dimension = 4096;
    const LiouvillianBudget budget{64};
    const SpectrumResult detuned = spectrum(build_model(ModelKind::SpinOnly, p, build), false, budget);
    const ImaginaryPairs with = imaginary_pairs(detuned, p.delta_a);
    p.delta_a = p.delta_b = 0.0;
    const SpectrumResult resonant = spectrum(build_model(ModelKind::SpinOnly, p, build), false, budget);
    const ImaginaryPairs without = imaginary_pairs(resonant, 0.0);
    std::string pairs = with.pairs == std::numeric_limits<std::size_t>::max() ? "unpaired" : std::to_string(with.pairs);
    return {with.pairs == 1 && without.pairs == 0,
            fmt("delta = 0.1g: %s pair(s) at Im = +-delta (need 1), eigenvalue nearest +i delta %.3e%+.3ei; "
                "delta = 0: %zu purely imaginary pair(s) (need 0), %zu zero eigenvalues",
                pairs.c_str(), with.nearest.real(), with.nearest.imag(), without.pairs,
                resonant.kernel_dimension())};
}

// ---- A7 ---------------------------------------------------------------------

Outcome a7() {
    ModelParams p = base_params();
    p.phi = kPi / 2;
    p.delta_a = p.delta_b = 0.1 * kG;
    // The padded spectrum locates the peak inside its bin; the bin itself is unchanged.
    ClassifierSettings settings;
    settings.frequency.zero_padding = kPadding;
    ClassifierSettings coarse;
    bool ok = true;
    std::ostringstream d;
    for (double eta_g : {0.2, 0.5, 1.2}) {
        const DriveProbe probe = classify_drive(p, x_polarized(), eta_g * kG, settings);
        const DriveProbe raw = classify_drive(p, x_polarized(), eta_g * kG, coarse);
        const double off = std::abs(probe.a.omega_tilde - p.delta_a) / probe.a.resolution;
        const bool within = !probe.a.stationary && off <= 1.0;
        ok = ok && (eta_g < 1.0 ? within : !within);
        d << fmt("eta=%.1fg: w/g=%.4f (%.2f bins from delta, unpadded %.4f); ", eta_g, probe.a.omega_tilde / kG, off,
                 raw.a.omega_tilde / kG);
    }
    d << fmt("bin = %.4fg", 2 * kPi / (settings.t_final * (1 - settings.frequency.transient_fraction)) / kG);
    return {ok, d.str()};
}

// ---- A8 ---------------------------------------------------------------------

Outcome a8() {
    ModelParams p = base_params();
    p.n_atoms = 2;
    p.eta = 0.0;
    const LindbladModel model = build_model(ModelKind::ThreeLevelEffective, p);
    EvolveOptions opts;
    opts.integrator.rtol = 1e-10;
    opts.integrator.atol = 1e-12;
    opts.keep_snapshots = true;

    const ComplexMatrix dark = pure(product(three_level_branch(p.phi, -1), 2));
    const Trajectory protected_run = evolve_density_matrix(model, dark, 50.0, 501, opts);
    double dev = 0.0;
    for (const auto& s : protected_run.snapshots) dev = std::max(dev, max_abs(s.rho - dark));

    const ComplexMatrix shifted = pure(product(three_level_branch(p.phi + kPi, -1), 2));
    const Trajectory bright_run = evolve_density_matrix(model, shifted, 50.0, 501, opts);
    const auto n0 = bright_run.real_series("N_0");
    const double moved = std::abs(n0.back() - n0.front());
    return {dev < 1e-8 && moved > 1e-3,
            fmt("dark: max |rho(t) - rho0| = %.2e (tol 1e-8); shifted by pi: ground population %.4f -> %.4f",
                dev, n0.front(), n0.back())};
}

// ---- A9 ---------------------------------------------------------------------

FrequencyEstimate three_level_frequency(double c_plus, double c_minus, double phi, double eta) {
    ModelParams p = base_params();
    p.phi = phi;
    p.eta = eta;
    const MeanFieldState3L init = three_level_initial_expectations(c_plus, c_minus, 0.0);
    const Trajectory traj = mf_evolve(init, p, 2e5, 16384);
    return dominant_frequency(traj.real_series("N_B"), traj.dt());
}

Outcome a9() {
    const double c_plus = (1 + std::sqrt(2.0)) / (2 * std::sqrt(2.0));
    const double c_minus = (1 - std::sqrt(2.0)) / (2 * std::sqrt(2.0));
    auto label = [](const FrequencyEstimate& f) { return f.stationary ? 0.0 : f.omega_tilde / kG; };
    const double w0 = label(three_level_frequency(c_plus, c_minus, 0.0, 0.5 * kG));
    const double w23 = label(three_level_frequency(c_plus, c_minus, 2 * kPi / 3, 0.5 * kG));
    std::size_t nonstationary = 0, total = 0;
    double slowest = std::numeric_limits<double>::infinity();
    const double grid[] = {-0.7, -0.35, 0.0, 0.35, 0.7};
    for (double cp : grid)
        for (double cm : grid) {
            ++total;
            const double w = label(three_level_frequency(cp, cm, 2 * kPi / 3, 0.75 * kG));
            slowest = std::min(slowest, w);
            if (w >= 0.01) ++nonstationary;
        }
    return {w0 < 0.01 && w23 >= 0.01 && nonstationary == total,
            fmt("eta=0.5g: w_NB/g = %.4f at phi=0 (need < 0.01), %.4f at phi=2pi/3 (need >= 0.01); "
                "eta=0.75g, phi=2pi/3: %zu/%zu grid points non-stationary, slowest w/g = %.4f",
                w0, w23, nonstationary, total, slowest)};
}

// ---- A10 --------------------------------------------------------------------

Outcome a10() {
    ModelParams p = base_params();
    p.eta = 1.2 * kG;
    p.phi = kPi / 3;
    MeanFieldOptions opts;
    opts.drift_abort = 1.0;
    const Trajectory two = mf_evolve(x_polarized(), p, 1e4, 2001, opts);
    const double spin_drift = std::max(two.diagnostics.conservation_drift.at("spin_length_A"),
                                       two.diagnostics.conservation_drift.at("spin_length_B"));

    p.eta = 0.5 * kG;
    p.phi = 2 * kPi / 3;
    const double c_plus = (1 + std::sqrt(2.0)) / (2 * std::sqrt(2.0));
    const double c_minus = (1 - std::sqrt(2.0)) / (2 * std::sqrt(2.0));
    const MeanFieldState3L init = three_level_initial_expectations(c_plus, c_minus, 0.0);
    const Trajectory three = mf_evolve(init, p, 1e3 / kG, 2001, opts);
    const double c_drift = std::max(three.diagnostics.conservation_drift.at("c2"),
                                    three.diagnostics.conservation_drift.at("c3"));

    double c2_error = 0.0;
    const std::pair<double, double> amplitudes[] = {{1.0, 0.0}, {0.0, 1.0}, {0.6, -0.8}, {c_plus, c_minus}, {0.3, 0.4}};
    for (const auto& [cp, cm] : amplitudes)
        for (double phi_state : {0.0, 1.1}) {
            const auto l = three_level_initial_expectations(cp, cm, phi_state).lambda;
            c2_error = std::max(c2_error, std::abs(casimir_c2(l) - 1.0 / 3.0));
        }
    return {spin_drift < 1e-6 && c_drift < 1e-6 && c2_error <= 1e-10,
            fmt("|s|^2 drift %.2e over kt=1e4; c2/c3 drift %.2e over gt=1e3; max |c2(0) - 1/3| = %.1e",
                spin_drift, c_drift, c2_error)};
}

// ---- A11 --------------------------------------------------------------------

Outcome a11() {
    ModelParams p;
    p.g = 0.02;
    p.eta = 0.01;
    p.kappa = 1.0;
    p.n_a = p.n_b = 1;
    p.n_max = 6;
    EvolveOptions opts;
    opts.integrator.rtol = 1e-9;
    opts.integrator.atol = 1e-11;
    const LindbladModel cavity = build_model(ModelKind::TwoSpeciesCavity, p);
    const LindbladModel spin = build_model(ModelKind::SpinOnly, p);
    ComplexVector vacuum = ComplexVector::Zero(p.n_max + 1);
    vacuum(0) = 1.0;
    const ComplexVector atoms = plus_x_product(spin.space);
    const Trajectory with_cavity = evolve_density_matrix(cavity, pure(kron(atoms, vacuum)), 500.0, 1001, opts);
    const Trajectory eliminated = evolve_density_matrix(spin, pure(atoms), 500.0, 1001, opts);
    const auto a = with_cavity.real_series("Sz_A");
    const auto b = eliminated.real_series("Sz_A");
    double dev = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        dev = std::max(dev, std::abs(a[k] - b[k]));
        scale = std::max(scale, std::abs(b[k]));
    }
    return {dev < 0.05 * scale,
            fmt("max |<Sz_A> cavity - spin-only| = %.3e, 5%% of max |<Sz_A>| = %.3e, max Fock-top population %.1e",
                dev, 0.05 * scale, with_cavity.diagnostics.max_leakage)};
}

// ---- A12 --------------------------------------------------------------------

Outcome a12() {
    GapScalingSpec spec;
    spec.base = base_params();
    spec.base.eta = 0.025;
    spec.base.delta_a = 0.2 * kPi;
    spec.n_list = {1, 2, 3, 4};
    spec.resolution = 1e-3;
    spec.budget = LiouvillianBudget{81};
    const SweepResult r = sweep(spec, {kernels::Exec::Serial, 1});
    bool ok = true;
    std::ostringstream d;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& pt : r.points) {
        const double gap = pt.ok ? pt.values.at(0) : std::numeric_limits<double>::quiet_NaN();
        ok = ok && pt.ok && std::isfinite(gap) && gap < prev;
        prev = gap;
        d << fmt("N=%d gap %.6e; ", int(pt.coords.at(0)), gap);
    }
    d << "strictly decreasing required";
    return {ok, d.str()};
}

// ---- A13 --------------------------------------------------------------------

Outcome a13() {
    ModelParams p = base_params();
    p.phi = 0.0;
    p.eta = 1.2 * kG;

    ClassifierSettings settings;
    settings.frequency.zero_padding = kPadding;
    const double w_mf = classify_drive(p, x_polarized(), p.eta, settings).a.omega_tilde;

    FrequencyOptions exact_freq;
    exact_freq.transient_fraction = 0.0;
    exact_freq.zero_padding = kPadding;
    EvolveOptions opts;
    opts.integrator.rtol = 1e-8;
    opts.integrator.atol = 1e-10;
    std::vector<double> w_exact;
    for (int n : {10, 20}) {
        p.n_a = p.n_b = n / 2;
        const LindbladModel model = build_model(ModelKind::SpinOnly, p);
        const Trajectory traj =
            evolve_density_matrix(model, pure(plus_x_product(model.space)), 1000.0, 2001, opts);
        std::vector<double> sz = traj.real_series("Sz_A");
        for (double& v : sz) v /= n / 4.0;
        w_exact.push_back(dominant_frequency(sz, traj.dt(), exact_freq).omega_tilde);
    }
    const double d10 = std::abs(w_exact[0] - w_mf), d20 = std::abs(w_exact[1] - w_mf);
    return {d20 < d10, fmt("w_mf/g = %.4f; exact w/g N=10 %.4f, N=20 %.4f; |w_N - w_mf|/g %.4f -> %.4f "
                           "(zero-padding x%zu)",
                           w_mf / kG, w_exact[0] / kG, w_exact[1] / kG, d10 / kG, d20 / kG, kPadding)};
}

struct Criterion {
    const char* id;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},   {"A5", a5},   {"A6", a6},   {"A7", a7},
        {"A8", a8}, {"A9", a9}, {"A10", a10}, {"A11", a11}, {"A12", a12}, {"A13", a13}, {"A14", a14},
    };
    std::set<std::string> selected(argv + 1, argv + argc);
    int failures = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failures;
        std::printf("%s %s %s [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
