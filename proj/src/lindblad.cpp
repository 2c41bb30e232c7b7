#include "phasesym/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "phasesym/error.hpp"
#include "phasesym/kernels.hpp"

namespace phasesym {

namespace {

void require_rho_shape(const LindbladModel& model, const ComplexMatrix& rho) {
    const auto d = Eigen::Index(model.dimension());
    if (rho.rows() != d || rho.cols() != d)
        throw DimensionError("density matrix is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                             " but the model space has dimension " + std::to_string(d));
}

} // namespace

ComplexMatrix apply_generator(const LindbladModel& model, const ComplexMatrix& rho) {
    require_rho_shape(model, rho);
    const auto g = kernels::prepare_generator(model.hamiltonian, model.jumps);
    ComplexMatrix out;
    kernels::apply_generator_parallel(g, rho, out);
    return out;
}

void check_density_matrix(const ComplexMatrix& rho, std::size_t dim, double tol) {
    if (std::size_t(rho.rows()) != dim || std::size_t(rho.cols()) != dim)
        throw DimensionError("initial density matrix does not match dimension " + std::to_string(dim));
    if (!rho.allFinite()) throw ValidationError("initial density matrix has non-finite entries");
    if (hermiticity_defect(rho) > tol) throw ValidationError("initial density matrix is not Hermitian");
    if (std::abs(rho.trace() - 1.0) > tol) throw ValidationError("initial density matrix does not have unit trace");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) throw ValidationError("initial density matrix is not positive semidefinite");
}

Trajectory evolve_density_matrix(const LindbladModel& model, const ComplexMatrix& rho0, double t_final,
                                 std::size_t sample_count, const EvolveOptions& opts) {
    check_density_matrix(rho0, model.dimension());
    const auto gen = kernels::prepare_generator(model.hamiltonian, model.jumps);

    Trajectory traj;
    traj.times = uniform_times(t_final, sample_count);
    for (const auto& o : model.observables) {
        Series s;
        s.name = o.name;
        s.complex_valued = hermiticity_defect(o.op) > 1e-14;
        s.values.resize(sample_count);
        traj.observables.push_back(std::move(s));
    }
    auto& diag = traj.diagnostics;
    diag.min_eigenvalue = 1.0;
    const ComplexMatrix* leakage_op = model.leakage_observable.empty() ? nullptr : &model.observable(model.leakage_observable);

    auto rhs = [&gen](double, const ComplexMatrix& rho, ComplexMatrix& out) {
        kernels::apply_generator_parallel(gen, rho, out);
    };
    auto project = [&diag](ComplexMatrix& rho) {
        const Complex tr = rho.trace();
        diag.max_trace_drift = std::max(diag.max_trace_drift, std::abs(tr - 1.0));
        diag.max_hermiticity_drift = std::max(diag.max_hermiticity_drift, hermiticity_defect(rho));
        rho = (rho + rho.adjoint()).eval() / 2.0;
        rho /= rho.trace().real();
    };
    auto sample = [&](std::size_t k, double t, const ComplexMatrix& rho) {
        for (std::size_t o = 0; o < model.observables.size(); ++o)
            traj.observables[o].values[k] = (model.observables[o].op * rho).trace();
        if (leakage_op) {
            const double leak = (*leakage_op * rho).trace().real();
            diag.max_leakage = std::max(diag.max_leakage, leak);
            if (leak > opts.leakage_threshold) diag.leakage_flagged = true;
        }
        if (opts.positivity_check) {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
            diag.min_eigenvalue = std::min(diag.min_eigenvalue, es.eigenvalues().minCoeff());
        }
        if (opts.keep_snapshots) traj.snapshots.push_back({t, rho});
    };

    ComplexMatrix rho = rho0;
    const IntegrationStats stats = integrate(rhs, rho, t_final, sample_count, opts.integrator, project, sample);
    diag.accepted_steps = stats.accepted;
    diag.rejected_steps = stats.rejected;
    return traj;
}

ComplexVector vectorize(const ComplexMatrix& rho) {
    return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index dim) {
    if (v.size() != dim * dim) throw DimensionError("unvectorize: length does not equal dim^2");
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

ComplexMatrix liouvillian_matrix(const LindbladModel& model, const LiouvillianBudget& budget) {
    if (model.dimension() > budget.max_dimension)
        throw BudgetError("Liouvillian of " + model.space.describe() + " exceeds the budget d <= " +
                          std::to_string(budget.max_dimension));
    return kernels::liouvillian_parallel(kernels::prepare_generator(model.hamiltonian, model.jumps));
}

} // namespace phasesym
