#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "phasesym/models.hpp"

// Hot loops with a serial reference and an OpenMP variant. The serial versions
// follow the textbook formulas and exist for testing and benchmarking.
namespace phasesym::kernels {

enum class Exec { Serial, Parallel };

struct GeneratorData {
    ComplexMatrix h;
    ComplexMatrix h_eff; // H - (i/2) sum_k rate_k L_k^dag L_k
    std::vector<double> rates;
    std::vector<ComplexMatrix> jumps;
    std::vector<ComplexMatrix> jumps_dag;
    std::vector<ComplexMatrix> jump_products; // L^dag L
};

GeneratorData prepare_generator(const ComplexMatrix& h, const std::vector<JumpOperator>& jumps);

// out = -i[H, rho] + sum_k rate_k (L rho L^dag - {L^dag L, rho} / 2)
void apply_generator_serial(const GeneratorData& g, const ComplexMatrix& rho, ComplexMatrix& out);
void apply_generator_parallel(const GeneratorData& g, const ComplexMatrix& rho, ComplexMatrix& out);

// Column-major vectorized superoperator, built from Kronecker products (serial)
// or by filling columns independently (parallel).
ComplexMatrix liouvillian_serial(const GeneratorData& g);
ComplexMatrix liouvillian_parallel(const GeneratorData& g);

// Runs body(i) for i in [0, n). Exceptions thrown by body are rethrown on the
// calling thread (the first one by index wins). jobs <= 0 means the OpenMP default.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Exec exec, int jobs = 0);

int max_threads();

} // namespace phasesym::kernels
