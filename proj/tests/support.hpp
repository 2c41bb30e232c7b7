#pragma once

#include <random>

#include "phasesym/operators.hpp"

namespace phasesym::testing {

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(n(rng), n(rng));
    return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index d, std::mt19937_64& rng) {
    const ComplexMatrix m = random_matrix(d, d, rng);
    return (m + m.adjoint()) / 2.0;
}

inline ComplexMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
    const ComplexMatrix m = random_matrix(d, d, rng);
    ComplexMatrix rho = m * m.adjoint();
    return rho / rho.trace().real();
}

inline ComplexMatrix ket_bra(const ComplexVector& psi) { return psi * psi.adjoint(); }

} // namespace phasesym::testing
