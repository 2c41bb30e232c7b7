#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "phasesym/integrator.hpp"
#include "phasesym/models.hpp"
#include "phasesym/trajectory.hpp"

namespace phasesym {

ComplexMatrix apply_generator(const LindbladModel& model, const ComplexMatrix& rho);

struct EvolveOptions {
    IntegratorOptions integrator;
    bool keep_snapshots = false;
    bool positivity_check = true;
    double leakage_threshold = 1e-6;
};

// Requires rho0 Hermitian, unit trace and positive semidefinite within 1e-10.
Trajectory evolve_density_matrix(const LindbladModel& model, const ComplexMatrix& rho0, double t_final,
                                 std::size_t sample_count, const EvolveOptions& opts = {});

void check_density_matrix(const ComplexMatrix& rho, std::size_t dim, double tol = 1e-10);

// Column-major vectorization: vec(rho)[i + d j] = rho(i, j).
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim);

struct LiouvillianBudget {
    std::size_t max_dimension = 64; // Hilbert-space dimension d; superoperator is d^2 x d^2
};

ComplexMatrix liouvillian_matrix(const LindbladModel& model, const LiouvillianBudget& budget = {});

struct SpectrumResult {
    std::vector<Complex> eigenvalues;         // Re descending, then |Im| ascending
    std::vector<ComplexMatrix> right_modes;   // empty unless modes were requested
    std::vector<ComplexMatrix> left_modes;    // Tr(left_a^dag right_b) = delta_ab
    std::string model_hash;
    std::size_t dimension = 0;                // Hilbert-space dimension d

    bool has_modes() const { return !right_modes.empty(); }
    std::size_t kernel_dimension(double tol = 1e-8) const;
};

SpectrumResult spectrum(const LindbladModel& model, bool want_modes, const LiouvillianBudget& budget = {});

// Orders eigen-pairs: Re descending, then |Im| ascending, then Im ascending.
bool spectral_order(const Complex& a, const Complex& b);

struct SteadyStateReport {
    ComplexMatrix rho;
    std::vector<Complex> kernel_eigenvalues; // every |lambda| < kernel_tolerance
    std::size_t kernel_dimension = 0;
    double kernel_tolerance = 1e-8;
};

SteadyStateReport steady_state(const LindbladModel& model, const LiouvillianBudget& budget = {});

} // namespace phasesym
