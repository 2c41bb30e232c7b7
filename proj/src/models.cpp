#include "phasesym/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "phasesym/error.hpp"

namespace phasesym {

void ModelParams::set_two_species_total(int n) {
    if (n <= 0 || n % 2 != 0) throw ValidationError("two-species N must be positive and even, got " + std::to_string(n));
    n_a = n_b = n / 2;
}

void ModelParams::validate() const {
    const double values[] = {g, phi, eta, kappa, delta_c, delta_a, delta_b};
    for (double v : values)
        if (!std::isfinite(v)) throw ValidationError("model parameters must be finite");
    if (kappa <= 0.0) throw ValidationError("kappa must be positive, got " + std::to_string(kappa));
    if (g < 0.0) throw ValidationError("g must be non-negative");
    if (eta < 0.0) throw ValidationError("eta must be non-negative");
    if (n_a < 0 || n_b < 0 || n_a + n_b == 0) throw ValidationError("two-species atom counts must be non-negative with N > 0");
    if (n_atoms < 1) throw ValidationError("three-level atom count must be >= 1");
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
}

double normalize_phase(double phi) {
    constexpr double pi = std::numbers::pi;
    if (phi >= -pi && phi <= pi) return phi;
    double r = std::remainder(phi, 2.0 * pi);
    if (r < -pi) r += 2.0 * pi;
    return r;
}

AdiabaticParams adiabatic_parameters(const ModelParams& p, int n_atoms) {
    if (!(p.kappa > 0.0)) throw ValidationError("adiabatic_parameters: kappa must be positive");
    if (n_atoms < 1) throw ValidationError("adiabatic_parameters: atom count must be >= 1");
    AdiabaticParams a;
    a.chi_bar = 1.0 / Complex(p.kappa / 2.0, p.delta_c);
    const double chi2 = std::norm(a.chi_bar);
    a.gamma = p.g * p.g * p.kappa * chi2;
    a.drive_amp = p.g * p.eta * a.chi_bar;
    a.lamb_coeff = -(p.g * p.g / n_atoms) * p.delta_c * chi2;
    const double fast = std::max(p.kappa, std::abs(p.delta_c));
    const double slow = std::max({std::abs(a.drive_amp), a.gamma, std::abs(a.lamb_coeff) * n_atoms});
    if (slow >= 0.1 * fast) {
        a.timescales_separated = false;
        std::ostringstream os;
        os << "adiabatic elimination questionable: atomic scale " << slow << " is not small against cavity scale "
           << fast;
        a.warning = os.str();
    }
    return a;
}

std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::TwoSpeciesCavity: return "two-species-cavity";
    case ModelKind::SpinOnly: return "spin-only";
    case ModelKind::ThreeLevelEffective: return "three-level-effective";
    case ModelKind::ThreeLevelCavity: return "three-level-cavity";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
    for (ModelKind k : {ModelKind::TwoSpeciesCavity, ModelKind::SpinOnly, ModelKind::ThreeLevelEffective,
                        ModelKind::ThreeLevelCavity})
        if (to_string(k) == name) return k;
    throw ValidationError("unknown model kind '" + name + "'");
}

bool is_two_species(ModelKind kind) {
    return kind == ModelKind::TwoSpeciesCavity || kind == ModelKind::SpinOnly;
}

const ComplexMatrix& LindbladModel::observable(const std::string& name) const {
    for (const auto& o : observables)
        if (o.name == name) return o.op;
    throw ValidationError("model has no observable named '" + name + "'");
}

namespace {

void add_two_species_observables(LindbladModel& m, const TwoSpeciesOperators& o) {
    const auto& s = m.space;
    m.observables = {
        {"Sz_A", embed_atomic(o.sa_z, s)}, {"Sz_B", embed_atomic(o.sb_z, s)},
        {"Sx_A", embed_atomic(o.sa_x, s)}, {"Sx_B", embed_atomic(o.sb_x, s)},
        {"Sy_A", embed_atomic(o.sa_y, s)}, {"Sy_B", embed_atomic(o.sb_y, s)},
    };
}

void add_three_level_observables(LindbladModel& m, const ThreeLevelOperators& o) {
    const auto& s = m.space;
    m.observables = {
        {"N_A", embed_atomic(o.n_a, s)},
        {"N_B", embed_atomic(o.n_b, s)},
        {"N_0", embed_atomic(o.n_0, s)},
    };
}

void add_cavity_observables(LindbladModel& m) {
    const ComplexMatrix a = cavity_annihilation(m.space);
    m.observables.push_back({"a", a});
    m.observables.push_back({"n_photon", a.adjoint() * a});
    m.observables.push_back({"fock_top", cavity_top_projector(m.space)});
    m.leakage_observable = "fock_top";
}

// Drive + Lamb-shift part of an adiabatically eliminated model.
ComplexMatrix effective_drive(const ComplexMatrix& lowering, const AdiabaticParams& ad, bool with_lamb) {
    ComplexMatrix h = ad.drive_amp * lowering + std::conj(ad.drive_amp) * lowering.adjoint();
    if (with_lamb) h += ad.lamb_coeff * (lowering.adjoint() * lowering);
    return h;
}

} // namespace

LindbladModel build_model(ModelKind kind, const ModelParams& params, const BuildOptions& opts) {
    params.validate();
    ModelParams p = params;
    p.phi = normalize_phase(p.phi);
    LindbladModel m;
    const bool cavity = kind == ModelKind::TwoSpeciesCavity || kind == ModelKind::ThreeLevelCavity;

    if (is_two_species(kind)) {
        const int n = p.n_a + p.n_b;
        HilbertSpace atoms = opts.full_space ? HilbertSpace::two_species_full(p.n_a, p.n_b)
                                             : HilbertSpace::two_species_collective(p.n_a, p.n_b);
        m.space = cavity ? atoms.with_cavity(p.n_max) : atoms;
        check_budget(m.space, opts.budget);
        const TwoSpeciesOperators o = two_species_operators(atoms, p.phi, opts.budget);
        const ComplexMatrix detuning = p.delta_a * o.sa_z + p.delta_b * o.sb_z;
        if (cavity) {
            const ComplexMatrix a = cavity_annihilation(m.space);
            const ComplexMatrix s = embed_atomic(o.s_phi, m.space);
            const double sqrt_n = std::sqrt(double(n));
            m.hamiltonian = p.delta_c * (a.adjoint() * a) + Complex(0.0, p.eta * sqrt_n) * (a.adjoint() - a) +
                            embed_atomic(detuning, m.space) +
                            (p.g / sqrt_n) * (a.adjoint() * s + a * s.adjoint());
            m.jumps.push_back({p.kappa, a, "a"});
        } else {
            const AdiabaticParams ad = adiabatic_parameters(p, n);
            const bool general = p.include_lamb_shift || p.delta_c != 0.0;
            m.hamiltonian = detuning + effective_drive(o.s_phi, ad, general);
            const double spin = n / 2.0;
            m.jumps.push_back({ad.gamma / (2.0 * spin), o.s_phi, "S_phi"});
        }
        add_two_species_observables(m, o);
    } else {
        const int n = p.n_atoms;
        HilbertSpace atoms = HilbertSpace::three_level_full(n);
        m.space = cavity ? atoms.with_cavity(p.n_max) : atoms;
        check_budget(m.space, opts.budget);
        const ThreeLevelOperators o = three_level_operators(atoms, p.phi, opts.budget);
        const ComplexMatrix detuning = p.delta_a * o.n_a + p.delta_b * o.n_b;
        if (cavity) {
            const ComplexMatrix a = cavity_annihilation(m.space);
            const ComplexMatrix l = embed_atomic(o.lambda_phi, m.space);
            const double sqrt_n = std::sqrt(double(n));
            m.hamiltonian = p.delta_c * (a.adjoint() * a) + Complex(0.0, p.eta * sqrt_n) * (a.adjoint() - a) +
                            embed_atomic(detuning, m.space) +
                            (p.g / sqrt_n) * (a * l.adjoint() + a.adjoint() * l);
            m.jumps.push_back({p.kappa, a, "a"});
        } else {
            const AdiabaticParams ad = adiabatic_parameters(p, n);
            const bool general = p.include_lamb_shift || p.delta_c != 0.0;
            m.hamiltonian = detuning + effective_drive(o.lambda_phi, ad, general);
            m.jumps.push_back({ad.gamma / n, o.lambda_phi, "Lambda_phi"});
        }
        add_three_level_observables(m, o);
    }
    if (cavity) add_cavity_observables(m);
    validate_model(m);
    return m;
}

void validate_model(const LindbladModel& model) {
    const auto d = Eigen::Index(model.space.dimension());
    auto square_of = [d](const ComplexMatrix& op) { return op.rows() == d && op.cols() == d; };
    if (!square_of(model.hamiltonian))
        throw DimensionError("Hamiltonian shape does not match " + model.space.describe());
    if (hermiticity_defect(model.hamiltonian) > 1e-12) throw ValidationError("Hamiltonian is not Hermitian");
    for (const auto& j : model.jumps) {
        if (!(j.rate >= 0.0)) throw ValidationError("jump '" + j.label + "' has a negative rate");
        if (!square_of(j.op)) throw DimensionError("jump '" + j.label + "' does not match " + model.space.describe());
    }
    for (const auto& o : model.observables)
        if (!square_of(o.op)) throw DimensionError("observable '" + o.name + "' does not match " + model.space.describe());
}

std::string model_fingerprint(const LindbladModel& model) {
    std::uint64_t h = 1469598103934665603ull;
    auto feed = [&h](const void* data, std::size_t bytes) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < bytes; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    auto feed_matrix = [&](const ComplexMatrix& m) {
        const Eigen::Index dims[2] = {m.rows(), m.cols()};
        feed(dims, sizeof dims);
        feed(m.data(), sizeof(Complex) * std::size_t(m.size()));
    };
    feed_matrix(model.hamiltonian);
    for (const auto& j : model.jumps) {
        feed(&j.rate, sizeof j.rate);
        feed_matrix(j.op);
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace phasesym
