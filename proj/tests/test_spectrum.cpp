#include "doctest.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasesym/lindblad.hpp"
#include "phasesym/symmetry.hpp"
#include "support.hpp"

using namespace phasesym;

namespace {

double min_eigenvalue(const ComplexMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

ModelParams spin_params(int n, double eta, double phi, double delta) {
    ModelParams p;
    p.g = 0.1;
    p.eta = eta;
    p.phi = phi;
    p.delta_a = p.delta_b = delta;
    p.set_two_species_total(n);
    return p;
}

} // namespace

TEST_CASE("spectrum invariants on a driven spin-only model") {
    const LindbladModel m = build_model(ModelKind::SpinOnly, spin_params(4, 0.03, 0.7, 0.01));
    const SpectrumResult s = spectrum(m, true);
    REQUIRE(s.eigenvalues.size() == 81);
    CHECK(s.eigenvalues.front().real() <= 1e-8);
    CHECK(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end(), spectral_order));
    // closed under conjugation
    for (const Complex& z : s.eigenvalues) {
        const auto it = std::min_element(s.eigenvalues.begin(), s.eigenvalues.end(), [&](const Complex& a, const Complex& b) {
            return std::abs(a - std::conj(z)) < std::abs(b - std::conj(z));
        });
        CHECK(std::abs(*it - std::conj(z)) < 1e-8);
    }
    // biorthonormal modes
    double worst = 0.0;
    for (std::size_t a = 0; a < s.left_modes.size(); a += 7)
        for (std::size_t b = 0; b < s.right_modes.size(); b += 5) {
            const Complex overlap = (s.left_modes[a].adjoint() * s.right_modes[b]).trace();
            worst = std::max(worst, std::abs(overlap - (a == b ? 1.0 : 0.0)));
        }
    CHECK(worst < 1e-8);
    CHECK(s.model_hash == model_fingerprint(m));
}

TEST_CASE("every model has a positive stationary mode") {
    const LindbladModel m = build_model(ModelKind::SpinOnly, spin_params(2, 0.02, 0.3, 0.0));
    const SteadyStateReport r = steady_state(m);
    CHECK(r.kernel_dimension >= 1);
    CHECK(std::abs(r.rho.trace() - 1.0) < 1e-12);
    CHECK(min_eigenvalue(r.rho) > -1e-8);
    CHECK(max_abs(apply_generator(m, r.rho)) < 1e-8);
}

TEST_CASE("single decaying atom relaxes to the ground state") {
    LindbladModel m;
    m.space = HilbertSpace::two_species_full(1, 0);
    m.hamiltonian = ComplexMatrix::Zero(2, 2);
    ComplexMatrix sm = ComplexMatrix::Zero(2, 2);
    sm(0, 1) = 1.0;
    m.jumps.push_back({1.0, sm, "sigma-"});
    const SteadyStateReport r = steady_state(m);
    CHECK(r.kernel_dimension == 1);
    ComplexMatrix down = ComplexMatrix::Zero(2, 2);
    down(0, 0) = 1.0;
    CHECK(max_abs(r.rho - down) < 1e-8);
}

TEST_CASE("three-level single atom without drive has a degenerate kernel") {
    ModelParams p;
    p.n_atoms = 1;
    p.eta = 0.0;
    const SteadyStateReport r = steady_state(build_model(ModelKind::ThreeLevelEffective, p));
    CHECK(r.kernel_dimension >= 2);
}

TEST_CASE("driven spin-only N = 4: kernel per sector and long-time weights") {
    const ModelParams p = spin_params(4, 0.05, 0.0, 0.0);
    const LindbladModel m = build_model(ModelKind::SpinOnly, p);
    const SectorDecomposition sectors = casimir_sectors(m.space, p.phi);
    const SpectrumResult s = spectrum(m, false);
    // one stationary state per Casimir sector (S = 0, 1, 2)
    CHECK(s.kernel_dimension() == sectors.labels.size());

    // start inside the S = 1 sector; the long-time state stays there
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sectors.projectors[1]);
    const ComplexVector psi = es.eigenvectors().col(Eigen::Index(m.dimension()) - 1);
    const ComplexMatrix rho0 = testing::ket_bra(psi);
    EvolveOptions o;
    o.keep_snapshots = true;
    const Trajectory t = evolve_density_matrix(m, rho0, 3000.0, 3, o);
    const ComplexMatrix& late = t.snapshots.back().rho;
    CHECK(max_abs(apply_generator(m, late)) < 1e-6);
    const WeightReport w0 = sector_weights(rho0, sectors), w1 = sector_weights(late, sectors);
    for (std::size_t k = 0; k < w0.weights.size(); ++k)
        CHECK(std::abs(w0.weights[k].second - w1.weights[k].second) < 1e-6);
}

TEST_CASE("modal expansion reproduces direct integration") {
    std::mt19937_64 rng(5);
    const ModelParams p = spin_params(2, 0.04, 0.9, 0.02);
    const LindbladModel m = build_model(ModelKind::SpinOnly, p);
    const SpectrumResult s = spectrum(m, true);
    const ComplexMatrix rho0 = testing::random_density(4, rng);
    const ComplexMatrix& obs = m.observable("Sz_A");
    const double t_final = 60.0;
    const Trajectory traj = evolve_density_matrix(m, rho0, t_final, 7);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        Complex modal = 0.0;
        for (std::size_t a = 0; a < s.eigenvalues.size(); ++a)
            modal += std::exp(s.eigenvalues[a] * traj.times[k]) * (s.left_modes[a].adjoint() * rho0).trace() *
                     (obs * s.right_modes[a]).trace();
        CHECK(std::abs(modal - traj.series("Sz_A").values[k]) < 1e-6);
    }
}
