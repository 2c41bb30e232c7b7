#include "phasesym/kernels.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#include <omp.h>

namespace phasesym::kernels {

int max_threads() { return omp_get_max_threads(); }

void apply_generator_parallel(const GeneratorData& g, const ComplexMatrix& rho, ComplexMatrix& out) {
    const Eigen::Index d = rho.rows();
    out.resize(d, d);
    const ComplexMatrix h_eff_dag = g.h_eff.adjoint();
    const int blocks = std::max(1, std::min<int>(omp_get_max_threads(), int(d)));
#pragma omp parallel for schedule(static)
    for (int b = 0; b < blocks; ++b) {
        const Eigen::Index c0 = d * b / blocks;
        const Eigen::Index w = d * (b + 1) / blocks - c0;
        auto cols = out.middleCols(c0, w);
        cols.noalias() = -kI * (g.h_eff * rho.middleCols(c0, w));
        cols.noalias() += kI * (rho * h_eff_dag.middleCols(c0, w));
        for (std::size_t k = 0; k < g.jumps.size(); ++k) {
            const ComplexMatrix m = rho * g.jumps_dag[k].middleCols(c0, w);
            cols.noalias() += g.rates[k] * (g.jumps[k] * m);
        }
    }
}

ComplexMatrix liouvillian_parallel(const GeneratorData& g) {
    const Eigen::Index d = g.h.rows();
    const Eigen::Index n = d * d;
    ComplexMatrix l = ComplexMatrix::Zero(n, n);
    const std::size_t nj = g.jumps.size();
    // column (k, l) holds the image of |k><l|; row (i, j) is entry rho_ij.
#pragma omp parallel for schedule(static)
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index k = c % d;
        const Eigen::Index ll = c / d;
        auto col = l.col(c);
        for (Eigen::Index i = 0; i < d; ++i) col(i + d * ll) += -kI * g.h_eff(i, k);
        for (Eigen::Index j = 0; j < d; ++j) col(k + d * j) += kI * std::conj(g.h_eff(j, ll));
        for (std::size_t q = 0; q < nj; ++q) {
            const ComplexMatrix& jump = g.jumps[q];
            const double rate = g.rates[q];
            for (Eigen::Index j = 0; j < d; ++j) {
                const Complex right = rate * std::conj(jump(j, ll));
                if (right == Complex(0.0)) continue;
                for (Eigen::Index i = 0; i < d; ++i) col(i + d * j) += jump(i, k) * right;
            }
        }
    }
    return l;
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec, int jobs) {
    if (exec == Exec::Serial || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
    std::exception_ptr first_error;
    std::size_t first_index = n;
    std::mutex guard;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (i < first_index) {
                first_index = i;
                first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace phasesym::kernels
