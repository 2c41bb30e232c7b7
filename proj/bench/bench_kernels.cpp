// Serial reference vs OpenMP kernels on a spin-only model (collective spins).
#include <benchmark/benchmark.h>

#include "phasesym/kernels.hpp"
#include "phasesym/models.hpp"

namespace {

using namespace phasesym;

kernels::GeneratorData generator_for(int n_total) {
    ModelParams p;
    p.set_two_species_total(n_total);
    p.phi = 0.7;
    p.eta = 0.05;
    p.delta_a = p.delta_b = 0.01;
    const LindbladModel m = build_model(ModelKind::SpinOnly, p);
    return kernels::prepare_generator(m.hamiltonian, m.jumps);
}

ComplexMatrix mixed_state(Eigen::Index d) {
    ComplexMatrix rho = ComplexMatrix::Identity(d, d) / double(d);
    rho(0, d - 1) = rho(d - 1, 0) = 0.1 / double(d);
    return rho;
}

void BM_GeneratorSerial(benchmark::State& state) {
    const auto g = generator_for(int(state.range(0)));
    const ComplexMatrix rho = mixed_state(g.h.rows());
    ComplexMatrix out;
    for (auto _ : state) {
        kernels::apply_generator_serial(g, rho, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["dim"] = double(g.h.rows());
}

void BM_GeneratorParallel(benchmark::State& state) {
    const auto g = generator_for(int(state.range(0)));
    const ComplexMatrix rho = mixed_state(g.h.rows());
    ComplexMatrix out;
    for (auto _ : state) {
        kernels::apply_generator_parallel(g, rho, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.counters["dim"] = double(g.h.rows());
    state.counters["threads"] = kernels::max_threads();
}

void BM_LiouvillianSerial(benchmark::State& state) {
    const auto g = generator_for(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::liouvillian_serial(g).data());
    state.counters["dim"] = double(g.h.rows());
}

void BM_LiouvillianParallel(benchmark::State& state) {
    const auto g = generator_for(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::liouvillian_parallel(g).data());
    state.counters["dim"] = double(g.h.rows());
    state.counters["threads"] = kernels::max_threads();
}

} // namespace

BENCHMARK(BM_GeneratorSerial)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GeneratorParallel)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LiouvillianSerial)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LiouvillianParallel)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
