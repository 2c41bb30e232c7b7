#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/LU>

#include "phasesym/error.hpp"
#include "phasesym/lindblad.hpp"

namespace phasesym {

bool spectral_order(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    if (std::abs(a.imag()) != std::abs(b.imag())) return std::abs(a.imag()) < std::abs(b.imag());
    return a.imag() < b.imag();
}

std::size_t SpectrumResult::kernel_dimension(double tol) const {
    return std::size_t(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                     [tol](const Complex& z) { return std::abs(z) < tol; }));
}

namespace {

struct Eigensystem {
    ComplexVector values;
    ComplexMatrix right; // columns, empty unless requested
};

Eigensystem nonsymmetric_eigensystem(ComplexMatrix a, bool want_right, const std::string& hash) {
    const lapack_int n = lapack_int(a.rows());
    Eigensystem es;
    es.values.resize(n);
    ComplexMatrix vr;
    if (want_right) vr.resize(n, n);
    Complex dummy;
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_right ? 'V' : 'N', n, a.data(), n,
                                          es.values.data(), &dummy, 1, want_right ? vr.data() : &dummy,
                                          want_right ? n : 1);
    if (info != 0)
        throw NumericalError("eigensolver failed (zgeev info " + std::to_string(info) + ") for model " + hash);
    es.right = std::move(vr);
    return es;
}

} // namespace

SpectrumResult spectrum(const LindbladModel& model, bool want_modes, const LiouvillianBudget& budget) {
    SpectrumResult result;
    result.model_hash = model_fingerprint(model);
    result.dimension = model.dimension();
    const Eigen::Index d = Eigen::Index(result.dimension);

    Eigensystem es = nonsymmetric_eigensystem(liouvillian_matrix(model, budget), want_modes, result.model_hash);
    const Eigen::Index n = es.values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return spectral_order(es.values(a), es.values(b)); });
    for (Eigen::Index k : order) result.eigenvalues.push_back(es.values(k));
    if (!want_modes) return result;

    Eigen::PartialPivLU<ComplexMatrix> lu(es.right);
    const ComplexMatrix inverse = lu.inverse();
    if (!inverse.allFinite())
        throw NumericalError("right eigenvectors are singular (defective Liouvillian) for model " + result.model_hash);
    result.right_modes.reserve(std::size_t(n));
    result.left_modes.reserve(std::size_t(n));
    for (Eigen::Index k : order) {
        result.right_modes.push_back(unvectorize(es.right.col(k), d));
        // row k of V^-1 is the dual vector; Tr(mu^dag nu) = vec(mu)^dag vec(nu)
        result.left_modes.push_back(unvectorize(inverse.row(k).adjoint(), d));
    }
    return result;
}

SteadyStateReport steady_state(const LindbladModel& model, const LiouvillianBudget& budget) {
    const std::string hash = model_fingerprint(model);
    const Eigen::Index d = Eigen::Index(model.dimension());
    const Eigensystem es = nonsymmetric_eigensystem(liouvillian_matrix(model, budget), true, hash);

    SteadyStateReport report;
    Eigen::Index nearest = 0;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        if (std::abs(es.values(k)) < report.kernel_tolerance) report.kernel_eigenvalues.push_back(es.values(k));
        if (std::abs(es.values(k)) < std::abs(es.values(nearest))) nearest = k;
    }
    std::sort(report.kernel_eigenvalues.begin(), report.kernel_eigenvalues.end(), spectral_order);
    report.kernel_dimension = report.kernel_eigenvalues.size();

    // Within a degenerate kernel pick the mode with the largest trace, which
    // can be normalized; traceless kernel modes are coherences between sectors.
    Eigen::Index chosen = nearest;
    double best_trace = -1.0;
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        if (std::abs(es.values(k)) >= report.kernel_tolerance) continue;
        const double tr = std::abs(unvectorize(es.right.col(k), d).trace());
        if (tr > best_trace) {
            best_trace = tr;
            chosen = k;
        }
    }
    ComplexMatrix rho = unvectorize(es.right.col(chosen), d);
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-12) throw NumericalError("steady-state mode has zero trace for model " + hash);
    rho /= tr;
    rho = (rho + rho.adjoint()).eval() / 2.0;
    report.rho = rho;
    return report;
}

} // namespace phasesym
