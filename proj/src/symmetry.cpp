#include "phasesym/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "phasesym/error.hpp"

namespace phasesym {

SectorDecomposition hermitian_sectors(const ComplexMatrix& op, double tol) {
    if (op.rows() != op.cols()) throw DimensionError("hermitian_sectors: operator is not square");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(op);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const ComplexMatrix& vecs = es.eigenvectors();
    SectorDecomposition out;
    Eigen::Index start = 0;
    const Eigen::Index n = ev.size();
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && ev(stop) - ev(stop - 1) < tol) ++stop;
        const ComplexMatrix block = vecs.middleCols(start, stop - start);
        out.labels.push_back(ev.segment(start, stop - start).mean());
        out.projectors.push_back(block * block.adjoint());
        out.multiplicities.push_back(std::size_t(stop - start));
        start = stop;
    }
    return out;
}

SectorDecomposition casimir_sectors(const HilbertSpace& space, double phi, double tol) {
    if (!space.is_two_species()) throw ValidationError("casimir_sectors: needs a two-species space");
    HilbertSpace atoms = space;
    atoms.photon_cutoff.reset();
    const TwoSpeciesOperators ops = two_species_operators(atoms, phi);
    SectorDecomposition sectors = hermitian_sectors(ops.casimir, tol);
    for (double label : sectors.labels) {
        // S(S+1) = label  ->  S = (sqrt(1 + 4 label) - 1) / 2 must be a half-integer
        const double s = (std::sqrt(1.0 + 4.0 * std::max(0.0, label)) - 1.0) / 2.0;
        if (std::abs(2.0 * s - std::round(2.0 * s)) > 1e-6 || label < -1e-6) {
            std::ostringstream os;
            os << "casimir_sectors: ambiguous clustering, eigenvalue clusters at";
            for (double l : sectors.labels) os << ' ' << l;
            throw NumericalError(os.str());
        }
    }
    return sectors;
}

namespace {

WeightReport finish_report(std::vector<std::pair<double, double>> weights) {
    WeightReport r;
    r.weights = std::move(weights);
    if (!r.weights.empty()) r.w_max = r.weights.back().second;
    double total = 0.0;
    for (const auto& w : r.weights) total += w.second;
    r.complement = total - r.w_max;
    return r;
}

} // namespace

WeightReport sector_weights(const ComplexMatrix& rho, const SectorDecomposition& sectors) {
    std::vector<std::pair<double, double>> w;
    for (std::size_t k = 0; k < sectors.labels.size(); ++k) {
        const ComplexMatrix& p = sectors.projectors[k];
        if (p.rows() != rho.rows() || rho.rows() != rho.cols())
            throw DimensionError("sector_weights: state dimension " + std::to_string(rho.rows()) +
                                 " does not match projector dimension " + std::to_string(p.rows()));
        w.emplace_back(sectors.labels[k], (p * rho).trace().real());
    }
    return finish_report(std::move(w));
}

WeightReport sector_weights(const ComplexVector& psi, const SectorDecomposition& sectors) {
    std::vector<std::pair<double, double>> w;
    for (std::size_t k = 0; k < sectors.labels.size(); ++k) {
        const ComplexMatrix& p = sectors.projectors[k];
        if (p.rows() != psi.size())
            throw DimensionError("sector_weights: state dimension " + std::to_string(psi.size()) +
                                 " does not match projector dimension " + std::to_string(p.rows()));
        w.emplace_back(sectors.labels[k], psi.dot(p * psi).real());
    }
    return finish_report(std::move(w));
}

SectorDecomposition tau_eigensystem(double phi) { return hermitian_sectors(tau_single(phi), 1e-8); }

ComplexVector plus_x_product(const HilbertSpace& space) {
    if (!space.is_two_species()) throw ValidationError("plus_x_product: needs a two-species space");
    auto spin_state = [](int n_sites) {
        // |+x>^{n} in the collective basis m = -j..j: binomial amplitudes
        const double j = n_sites / 2.0;
        ComplexVector v(n_sites + 1);
        for (int k = 0; k <= n_sites; ++k) {
            const double log_binom = std::lgamma(n_sites + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_sites - k + 1.0);
            v(k) = std::exp(0.5 * log_binom - j * std::log(2.0));
        }
        return v;
    };
    ComplexVector out;
    if (space.atoms == AtomKind::TwoSpeciesCollective) {
        const ComplexVector a = spin_state(space.n_a), b = spin_state(space.n_b);
        out = kron(a, b);
    } else {
        ComplexVector site(2);
        site << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
        out = ComplexVector::Ones(1);
        for (int s = 0; s < space.n_a + space.n_b; ++s) out = kron(out, site);
    }
    if (space.photon_cutoff) {
        ComplexVector vacuum = ComplexVector::Zero(Eigen::Index(space.cavity_dimension()));
        vacuum(0) = 1.0;
        out = kron(out, vacuum);
    }
    return out;
}

namespace {

// Applies the single-site 3x3 operator `op` to every site of an n-site vector.
ComplexVector apply_product(const ComplexMatrix& op, const ComplexVector& psi, int n) {
    ComplexVector v = psi;
    Eigen::Index stride = 1;
    for (int site = n - 1; site >= 0; --site) {
        ComplexVector next(v.size());
        const Eigen::Index block = stride * 3;
        for (Eigen::Index base = 0; base < v.size(); base += block)
            for (Eigen::Index r = 0; r < stride; ++r)
                for (int a = 0; a < 3; ++a) {
                    Complex acc = 0.0;
                    for (int b = 0; b < 3; ++b) acc += op(a, b) * v(base + b * stride + r);
                    next(base + a * stride + r) = acc;
                }
        v = std::move(next);
        stride *= 3;
    }
    return v;
}

ComplexVector product_state(const ComplexVector& site, int n) {
    ComplexVector out = ComplexVector::Ones(1);
    for (int k = 0; k < n; ++k) out = kron(out, site);
    return out;
}

} // namespace

BrightDarkWeights bright_dark_weights(double c_plus, double c_minus, int n, double phi_state, double phi_projector) {
    if (n < 1) throw ValidationError("bright_dark_weights: N must be >= 1");
    const double rest = 1.0 - c_plus * c_plus - c_minus * c_minus;
    if (!std::isfinite(rest) || rest < -1e-12)
        throw ValidationError("bright_dark_weights: amplitudes violate c+^2 + c-^2 <= 1");
    const double c0 = std::sqrt(std::max(0.0, rest));
    const double shift = std::remainder(phi_projector - phi_state, 2.0 * std::numbers::pi);
    if (std::abs(shift) < 1e-14) return {c_plus * c_plus + c0 * c0, c_minus * c_minus};
    if (n > 6)
        throw BudgetError("bright_dark_weights: exact tensor path is limited to N <= 6 when the phases differ");

    ComplexVector ground = ComplexVector::Zero(3);
    ground(level::ground) = 1.0;
    const ComplexVector psi = c_plus * product_state(three_level_branch(phi_state, +1), n) +
                              c_minus * product_state(three_level_branch(phi_state, -1), n) +
                              c0 * product_state(ground, n);
    const SectorDecomposition tau = tau_eigensystem(phi_projector);
    // labels ascending: index 0 is -1 (dark), index 1 is +1 (bright)
    const ComplexVector dark = apply_product(tau.projectors[0], psi, n);
    const ComplexVector bright = apply_product(tau.projectors[1], psi, n);
    return {psi.dot(bright).real(), psi.dot(dark).real()};
}

SingletOverlap singlet_overlap(double phi) {
    SingletOverlap r;
    r.closed_form = (1.0 - std::polar(1.0, -phi)) / 2.0;
    // basis (down, up) per site, site A first: |ud> = index 2, |du> = index 1
    ComplexVector singlet = ComplexVector::Zero(4);
    singlet(2) = 1.0 / std::numbers::sqrt2;
    singlet(1) = -std::polar(1.0, phi) / std::numbers::sqrt2;
    // symmetric single-excitation state (|ud> + |du>)/sqrt2
    ComplexVector symmetric = ComplexVector::Zero(4);
    symmetric(1) = symmetric(2) = 1.0 / std::numbers::sqrt2;
    r.explicit_vectors = singlet.dot(symmetric);
    return r;
}

bool SymmetryResiduals::is_strong(double tol) const {
    if (h_residual >= tol) return false;
    return std::all_of(jump_residuals.begin(), jump_residuals.end(), [tol](double r) { return r < tol; });
}

SymmetryResiduals symmetry_residuals(const LindbladModel& model, const ComplexMatrix& a) {
    if (a.rows() != model.hamiltonian.rows() || a.cols() != model.hamiltonian.cols())
        throw DimensionError("symmetry_residuals: operator shape does not match the model");
    SymmetryResiduals r;
    r.h_residual = max_abs(commutator(a, model.hamiltonian));
    for (const auto& j : model.jumps) r.jump_residuals.push_back(max_abs(commutator(a, j.op)));
    return r;
}

ComplexMatrix symmetry_operator(const LindbladModel& model, double phi) {
    HilbertSpace atoms = model.space;
    atoms.photon_cutoff.reset();
    if (model.space.is_two_species()) return embed_atomic(two_species_operators(atoms, phi).casimir, model.space);
    return embed_atomic(three_level_operators(atoms, phi).tau_total, model.space);
}

} // namespace phasesym
