#include "phasesym/kernels.hpp"

#include <exception>

#include "phasesym/error.hpp"

namespace phasesym::kernels {

GeneratorData prepare_generator(const ComplexMatrix& h, const std::vector<JumpOperator>& jumps) {
    GeneratorData g;
    g.h = h;
    g.h_eff = h;
    for (const auto& j : jumps) {
        if (j.op.rows() != h.rows() || j.op.cols() != h.cols())
            throw DimensionError("jump '" + j.label + "' does not match the Hamiltonian shape");
        g.rates.push_back(j.rate);
        g.jumps.push_back(j.op);
        g.jumps_dag.push_back(j.op.adjoint());
        g.jump_products.push_back(g.jumps_dag.back() * j.op);
        g.h_eff -= Complex(0.0, 0.5 * j.rate) * g.jump_products.back();
    }
    return g;
}

void apply_generator_serial(const GeneratorData& g, const ComplexMatrix& rho, ComplexMatrix& out) {
    out = -kI * commutator(g.h, rho);
    for (std::size_t k = 0; k < g.jumps.size(); ++k)
        out += g.rates[k] * (g.jumps[k] * rho * g.jumps_dag[k] - 0.5 * anticommutator(g.jump_products[k], rho));
}

ComplexMatrix liouvillian_serial(const GeneratorData& g) {
    const Eigen::Index d = g.h.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    ComplexMatrix l = -kI * (kron(id, g.h) - kron(g.h.transpose(), id));
    for (std::size_t k = 0; k < g.jumps.size(); ++k) {
        const ComplexMatrix& jump = g.jumps[k];
        const ComplexMatrix& prod = g.jump_products[k];
        l += g.rates[k] * (kron(jump.conjugate(), jump) - 0.5 * kron(id, prod) - 0.5 * kron(prod.transpose(), id));
    }
    return l;
}

} // namespace phasesym::kernels
