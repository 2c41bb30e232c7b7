#include "phasesym/meanfield.hpp"

#include <cmath>
#include <numbers>

#include "phasesym/error.hpp"

namespace phasesym {

std::string to_string(ThreeLevelCoupling c) { return c == ThreeLevelCoupling::Lambda ? "lambda" : "ladder"; }

ThreeLevelCoupling coupling_from_string(const std::string& name) {
    if (name == "lambda") return ThreeLevelCoupling::Lambda;
    if (name == "ladder") return ThreeLevelCoupling::Ladder;
    throw ValidationError("unknown three-level coupling '" + name + "' (expected lambda or ladder)");
}

std::string to_string(InitialStateMapping m) {
    return m == InitialStateMapping::PureSingleAtom ? "pure" : "mixture";
}

InitialStateMapping mapping_from_string(const std::string& name) {
    if (name == "pure") return InitialStateMapping::PureSingleAtom;
    if (name == "mixture") return InitialStateMapping::ReducedMixture;
    throw ValidationError("unknown initial-state mapping '" + name + "' (expected pure or mixture)");
}

MeanFieldKind kind_of(const MeanFieldState& s) {
    return std::holds_alternative<MeanFieldState2S>(s) ? MeanFieldKind::TwoSpecies : MeanFieldKind::ThreeLevel;
}

Eigen::VectorXd pack(const MeanFieldState& s) {
    Eigen::VectorXd y;
    if (const auto* t = std::get_if<MeanFieldState2S>(&s)) {
        y.resize(8);
        y << t->sa, t->sb, t->alpha.real(), t->alpha.imag();
    } else {
        const auto& r = std::get<MeanFieldState3L>(s);
        y.resize(10);
        for (int a = 0; a < 8; ++a) y(a) = r.lambda[std::size_t(a)];
        y(8) = r.alpha.real();
        y(9) = r.alpha.imag();
    }
    return y;
}

MeanFieldState unpack(MeanFieldKind kind, const Eigen::VectorXd& y) {
    if (kind == MeanFieldKind::TwoSpecies) {
        if (y.size() != 8) throw DimensionError("two-species mean-field state needs 8 components");
        MeanFieldState2S s;
        s.sa = y.segment<3>(0);
        s.sb = y.segment<3>(3);
        s.alpha = {y(6), y(7)};
        return s;
    }
    if (y.size() != 10) throw DimensionError("three-level mean-field state needs 10 components");
    MeanFieldState3L s;
    for (int a = 0; a < 8; ++a) s.lambda[std::size_t(a)] = y(a);
    s.alpha = {y(8), y(9)};
    return s;
}

double casimir_c2(const std::array<double, 8>& l) {
    double c = 0.0;
    for (double v : l) c += v * v;
    return c;
}

double casimir_c3(const std::array<double, 8>& l) {
    const auto& d = su3_symmetric_constants();
    double c = 0.0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int e = 0; e < 8; ++e) c += d[a][b][e] * l[a] * l[b] * l[e];
    return c;
}

Populations populations(const std::array<double, 8>& l) {
    const double s3 = std::sqrt(3.0);
    return {1.0 / 3 + l[2] + l[7] / s3, 1.0 / 3 - l[2] + l[7] / s3, 1.0 / 3 - 2.0 * l[7] / s3};
}

void validate_state(const MeanFieldState& s) {
    if (!pack(s).allFinite()) throw ValidationError("mean-field state has non-finite components");
    if (const auto* t = std::get_if<MeanFieldState2S>(&s)) {
        if (t->sa.squaredNorm() > 1.0 + 1e-9 || t->sb.squaredNorm() > 1.0 + 1e-9)
            throw ValidationError("Bloch vectors must satisfy |s|^2 <= 1");
    } else {
        if (casimir_c2(std::get<MeanFieldState3L>(s).lambda) > 1.0 / 3 + 1e-9)
            throw ValidationError("Gell-Mann vector exceeds the pure-state length c2 = 1/3");
    }
}

ComplexMatrix density_from_gell_mann(const std::array<double, 8>& lambda) {
    const auto& gm = gell_mann_basis();
    ComplexMatrix rho = ComplexMatrix::Identity(3, 3) / 3.0;
    for (int a = 0; a < 8; ++a) rho += 2.0 * lambda[std::size_t(a)] * gm[std::size_t(a)];
    return rho;
}

std::array<double, 8> gell_mann_expectations(const ComplexMatrix& rho) {
    const auto& gm = gell_mann_basis();
    std::array<double, 8> l{};
    for (int a = 0; a < 8; ++a) l[std::size_t(a)] = (rho * gm[std::size_t(a)]).trace().real();
    return l;
}

namespace {

// ---- two-species: the seven printed equations, with alpha complex ---------

void two_species_rhs(const ModelParams& p, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const double sax = y(0), say = y(1), saz = y(2), sbx = y(3), sby = y(4), sbz = y(5);
    const Complex a(y(6), y(7));
    const Complex ac = std::conj(a);
    const Complex i = kI;
    const Complex em = std::polar(1.0, -p.phi); // e^{-i phi}
    const Complex ep = std::polar(1.0, p.phi);
    const double g = p.g, da = p.delta_a, db = p.delta_b;

    dy.resize(8);
    dy(0) = (-da * say + i * g * saz * (a - ac)).real();
    dy(3) = (-db * sby + i * g * sbz * (ep * a - em * ac)).real();
    dy(1) = (da * sax - g * saz * (ac + a)).real();
    dy(4) = (db * sbx - g * sbz * (em * ac + ep * a)).real();
    dy(2) = (-i * g * sax * (a - ac) + g * say * (ac + a)).real();
    dy(5) = (-i * g * sbx * (ep * a - em * ac) + g * sby * (em * ac + ep * a)).real();
    const Complex dalpha = -(i * p.delta_c + p.kappa / 2) * a -
                           (g / 2) * (i * (sax + em * sbx) + (say + em * sby)) + p.eta;
    dy(6) = dalpha.real();
    dy(7) = dalpha.imag();
}

Eigen::MatrixXd two_species_jacobian(const ModelParams& p, const Eigen::VectorXd& y) {
    // Real form: with beta = e^{i phi} alpha,
    //   dsAx = -dA sAy - 2g Im(a) sAz, dsAy = dA sAx - 2g Re(a) sAz, dsAz = 2g(Im(a) sAx + Re(a) sAy)
    // and the same for B with beta in place of alpha.
    const double g = p.g, c = std::cos(p.phi), s = std::sin(p.phi);
    const double ar = y(6), ai = y(7);
    const double br = c * ar - s * ai, bi = s * ar + c * ai;
    // d(br, bi)/d(ar, ai)
    const double dbr_ar = c, dbr_ai = -s, dbi_ar = s, dbi_ai = c;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(8, 8);

    j(0, 1) = -p.delta_a;
    j(0, 2) = -2 * g * ai;
    j(0, 7) = -2 * g * y(2);
    j(1, 0) = p.delta_a;
    j(1, 2) = -2 * g * ar;
    j(1, 6) = -2 * g * y(2);
    j(2, 0) = 2 * g * ai;
    j(2, 1) = 2 * g * ar;
    j(2, 6) = 2 * g * y(1);
    j(2, 7) = 2 * g * y(0);

    j(3, 4) = -p.delta_b;
    j(3, 5) = -2 * g * bi;
    j(3, 6) = -2 * g * y(5) * dbi_ar;
    j(3, 7) = -2 * g * y(5) * dbi_ai;
    j(4, 3) = p.delta_b;
    j(4, 5) = -2 * g * br;
    j(4, 6) = -2 * g * y(5) * dbr_ar;
    j(4, 7) = -2 * g * y(5) * dbr_ai;
    j(5, 3) = 2 * g * bi;
    j(5, 4) = 2 * g * br;
    j(5, 6) = 2 * g * (y(3) * dbi_ar + y(4) * dbr_ar);
    j(5, 7) = 2 * g * (y(3) * dbi_ai + y(4) * dbr_ai);

    // dalpha = (-k/2 - i dc) alpha - (g/2)(i sAx + sAy + e^{-i phi}(i sBx + sBy)) + eta
    j(6, 6) = -p.kappa / 2;
    j(6, 7) = p.delta_c;
    j(7, 6) = -p.delta_c;
    j(7, 7) = -p.kappa / 2;
    const Complex em = std::polar(1.0, -p.phi);
    const Complex d_sax = -(g / 2) * kI, d_say = -(g / 2);
    const Complex d_sbx = -(g / 2) * kI * em, d_sby = -(g / 2) * em;
    j(6, 0) = d_sax.real();
    j(7, 0) = d_sax.imag();
    j(6, 1) = d_say.real();
    j(7, 1) = d_say.imag();
    j(6, 3) = d_sbx.real();
    j(7, 3) = d_sbx.imag();
    j(6, 4) = d_sby.real();
    j(7, 4) = d_sby.imag();
    return j;
}

// ---- three-level: generic Gell-Mann flow dl_a/dt = -sum f_bac h_b l_c -----

ComplexMatrix coupling_operator(ThreeLevelCoupling coupling, double phi) {
    const Complex e = std::polar(1.0, -phi);
    ComplexMatrix j = three_level_projector(level::ground, level::A);
    if (coupling == ThreeLevelCoupling::Lambda)
        j += e * three_level_projector(level::ground, level::B);
    else
        j += e * three_level_projector(level::B, level::ground);
    return j;
}

// Coefficients of a 3x3 Hermitian operator in the Gell-Mann basis, h_b = 2 Tr(H l_b).
std::array<double, 8> gell_mann_coefficients(const ComplexMatrix& h) {
    const auto& gm = gell_mann_basis();
    std::array<double, 8> c{};
    for (int b = 0; b < 8; ++b) c[std::size_t(b)] = 2.0 * (h * gm[std::size_t(b)]).trace().real();
    return c;
}

struct ThreeLevelTerms {
    std::array<double, 8> h0{};   // detuning part
    std::array<double, 8> u{};    // coefficient of Re(alpha)
    std::array<double, 8> v{};    // coefficient of Im(alpha)
    std::array<Complex, 8> j_of{}; // <J> = sum_b 2 Tr(l_b J) <l_b>
};

ThreeLevelTerms three_level_terms(const ModelParams& p, ThreeLevelCoupling coupling) {
    const ComplexMatrix j = coupling_operator(coupling, p.phi);
    const ComplexMatrix detuning = p.delta_a * three_level_projector(level::A, level::A) +
                                   p.delta_b * three_level_projector(level::B, level::B);
    ThreeLevelTerms t;
    t.h0 = gell_mann_coefficients(detuning);
    // g (alpha* J + alpha J^dag) = Re(alpha) g (J + J^dag) + Im(alpha) g i (J^dag - J)
    t.u = gell_mann_coefficients(p.g * (j + j.adjoint()));
    t.v = gell_mann_coefficients(p.g * kI * (j.adjoint() - j));
    const auto& gm = gell_mann_basis();
    for (int b = 0; b < 8; ++b) t.j_of[std::size_t(b)] = 2.0 * (gm[std::size_t(b)] * j).trace();
    return t;
}

// RHS with the coupling-dependent constants hoisted out of the step loop.
struct ThreeLevelFlow {
    ThreeLevelTerms t;
    const ModelParams& p;

    void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
        const auto& f = su3_structure_constants();
        const double ar = y(8), ai = y(9);
        double h[8];
        for (int b = 0; b < 8; ++b) h[b] = t.h0[b] + ar * t.u[b] + ai * t.v[b];
        dy.resize(10);
        Complex mean_j = 0.0;
        for (int a = 0; a < 8; ++a) {
            double acc = 0.0;
            for (int b = 0; b < 8; ++b) {
                if (h[b] == 0.0) continue;
                for (int c = 0; c < 8; ++c) acc -= f[b][a][c] * h[b] * y(c);
            }
            dy(a) = acc;
            mean_j += t.j_of[a] * y(a);
        }
        const Complex dalpha = -(kI * p.delta_c + p.kappa / 2) * Complex(ar, ai) - kI * p.g * mean_j + p.eta;
        dy(8) = dalpha.real();
        dy(9) = dalpha.imag();
    }
};

void three_level_rhs(const ModelParams& p, ThreeLevelCoupling coupling, const Eigen::VectorXd& y,
                     Eigen::VectorXd& dy) {
    ThreeLevelFlow{three_level_terms(p, coupling), p}(y, dy);
}

Eigen::MatrixXd three_level_jacobian(const ModelParams& p, ThreeLevelCoupling coupling, const Eigen::VectorXd& y) {
    const ThreeLevelTerms t = three_level_terms(p, coupling);
    const auto& f = su3_structure_constants();
    const double ar = y(8), ai = y(9);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(10, 10);
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
            for (int c = 0; c < 8; ++c) {
                const double fb = f[b][a][c];
                if (fb == 0.0) continue;
                jac(a, c) -= fb * (t.h0[b] + ar * t.u[b] + ai * t.v[b]);
                jac(a, 8) -= fb * t.u[b] * y(c);
                jac(a, 9) -= fb * t.v[b] * y(c);
            }
    for (int b = 0; b < 8; ++b) {
        const Complex d = -kI * p.g * t.j_of[b];
        jac(8, b) = d.real();
        jac(9, b) = d.imag();
    }
    jac(8, 8) = -p.kappa / 2;
    jac(8, 9) = p.delta_c;
    jac(9, 8) = -p.delta_c;
    jac(9, 9) = -p.kappa / 2;
    return jac;
}

} // namespace

void mf_rhs_packed(MeanFieldKind kind, const ModelParams& p, ThreeLevelCoupling coupling, const Eigen::VectorXd& y,
                   Eigen::VectorXd& dy) {
    if (!y.allFinite()) throw ValidationError("mf_rhs: state has non-finite components");
    if (kind == MeanFieldKind::TwoSpecies) {
        if (y.size() != 8) throw DimensionError("two-species mean-field state needs 8 components");
        two_species_rhs(p, y, dy);
    } else {
        if (y.size() != 10) throw DimensionError("three-level mean-field state needs 10 components");
        three_level_rhs(p, coupling, y, dy);
    }
}

MeanFieldState mf_rhs(const MeanFieldState& state, const ModelParams& p, ThreeLevelCoupling coupling) {
    const MeanFieldKind kind = kind_of(state);
    Eigen::VectorXd dy;
    mf_rhs_packed(kind, p, coupling, pack(state), dy);
    return unpack(kind, dy);
}

Eigen::MatrixXd mf_jacobian(MeanFieldKind kind, const ModelParams& p, ThreeLevelCoupling coupling,
                            const Eigen::VectorXd& y) {
    return kind == MeanFieldKind::TwoSpecies ? two_species_jacobian(p, y) : three_level_jacobian(p, coupling, y);
}

namespace {

std::array<double, 8> lambda_of(const Eigen::VectorXd& y) {
    std::array<double, 8> l{};
    for (int a = 0; a < 8; ++a) l[std::size_t(a)] = y(a);
    return l;
}

} // namespace

Trajectory mf_evolve(const MeanFieldState& init, const ModelParams& params, double t_final, std::size_t sample_count,
                     const MeanFieldOptions& opts) {
    params.validate();
    validate_state(init);
    ModelParams p = params;
    p.phi = normalize_phase(p.phi);
    const MeanFieldKind kind = kind_of(init);

    Trajectory traj;
    traj.times = uniform_times(t_final, sample_count);
    auto add = [&](const std::string& name, bool complex_valued) {
        traj.observables.push_back({name, std::vector<Complex>(sample_count), complex_valued});
    };
    add("alpha", true);
    if (kind == MeanFieldKind::TwoSpecies) {
        for (const char* n : {"sx_A", "sy_A", "sz_A", "sx_B", "sy_B", "sz_B"}) add(n, false);
    } else {
        for (int a = 1; a <= 8; ++a) add("lambda_" + std::to_string(a), false);
        for (const char* n : {"N_A", "N_0", "N_B", "c2", "c3"}) add(n, false);
    }

    Eigen::VectorXd y = pack(init);
    // conserved quantities at t = 0
    std::vector<std::pair<std::string, double>> invariants;
    auto invariant_values = [&](const Eigen::VectorXd& s) {
        if (kind == MeanFieldKind::TwoSpecies)
            return std::vector<double>{s.segment<3>(0).squaredNorm(), s.segment<3>(3).squaredNorm()};
        const auto l = lambda_of(s);
        return std::vector<double>{casimir_c2(l), casimir_c3(l)};
    };
    const std::vector<std::string> invariant_names = kind == MeanFieldKind::TwoSpecies
                                                         ? std::vector<std::string>{"spin_length_A", "spin_length_B"}
                                                         : std::vector<std::string>{"c2", "c3"};
    const std::vector<double> initial_invariants = invariant_values(y);
    auto& drift = traj.diagnostics.conservation_drift;
    for (const auto& n : invariant_names) drift[n] = 0.0;

    auto sample = [&](std::size_t k, double, const Eigen::VectorXd& s) {
        std::size_t col = 0;
        traj.observables[col++].values[k] = Complex(s(s.size() - 2), s(s.size() - 1));
        if (kind == MeanFieldKind::TwoSpecies) {
            for (int c = 0; c < 6; ++c) traj.observables[col++].values[k] = s(c);
        } else {
            const auto l = lambda_of(s);
            for (int a = 0; a < 8; ++a) traj.observables[col++].values[k] = l[std::size_t(a)];
            const Populations pop = populations(l);
            traj.observables[col++].values[k] = pop.n_a;
            traj.observables[col++].values[k] = pop.n_0;
            traj.observables[col++].values[k] = pop.n_b;
            traj.observables[col++].values[k] = casimir_c2(l);
            traj.observables[col++].values[k] = casimir_c3(l);
        }
        const auto now = invariant_values(s);
        for (std::size_t q = 0; q < now.size(); ++q) {
            const double d = std::abs(now[q] - initial_invariants[q]);
            drift[invariant_names[q]] = std::max(drift[invariant_names[q]], d);
            if (d > opts.drift_abort)
                throw NumericalError("mean-field invariant " + invariant_names[q] + " drifted by " + std::to_string(d) +
                                     " (limit " + std::to_string(opts.drift_abort) + ") at t = " +
                                     std::to_string(traj.times[k]));
        }
    };
    auto no_projection = [](Eigen::VectorXd&) {};

    IntegrationStats stats;
    if (kind == MeanFieldKind::TwoSpecies) {
        auto rhs = [&p](double, const Eigen::VectorXd& s, Eigen::VectorXd& ds) { two_species_rhs(p, s, ds); };
        stats = integrate(rhs, y, t_final, sample_count, opts.integrator, no_projection, sample);
    } else {
        const ThreeLevelFlow flow{three_level_terms(p, opts.coupling), p};
        auto rhs = [&flow](double, const Eigen::VectorXd& s, Eigen::VectorXd& ds) { flow(s, ds); };
        stats = integrate(rhs, y, t_final, sample_count, opts.integrator, no_projection, sample);
    }
    traj.diagnostics.accepted_steps = stats.accepted;
    traj.diagnostics.rejected_steps = stats.rejected;
    return traj;
}

MeanFieldState3L three_level_initial_expectations(double c_plus, double c_minus, double phi_state,
                                                  InitialStateMapping mapping) {
    if (!std::isfinite(c_plus) || !std::isfinite(c_minus))
        throw ValidationError("initial amplitudes must be finite");
    const double rest = 1.0 - c_plus * c_plus - c_minus * c_minus;
    if (rest < -1e-12)
        throw ValidationError("initial amplitudes violate c+^2 + c-^2 <= 1 (got " + std::to_string(c_plus) + ", " +
                              std::to_string(c_minus) + ")");
    const double c0 = std::sqrt(std::max(0.0, rest));
    const ComplexVector plus = three_level_branch(phi_state, +1);
    const ComplexVector minus = three_level_branch(phi_state, -1);
    ComplexVector ground = ComplexVector::Zero(3);
    ground(level::ground) = 1.0;

    ComplexMatrix rho;
    if (mapping == InitialStateMapping::PureSingleAtom) {
        const ComplexVector psi = c_plus * plus + c_minus * minus + c0 * ground;
        rho = psi * psi.adjoint();
    } else {
        rho = c_plus * c_plus * plus * plus.adjoint() + c_minus * c_minus * minus * minus.adjoint() +
              c0 * c0 * ground * ground.adjoint();
    }
    MeanFieldState3L s;
    s.lambda = gell_mann_expectations(rho);
    return s;
}

} // namespace phasesym
