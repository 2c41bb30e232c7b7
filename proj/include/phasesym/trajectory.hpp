#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "phasesym/operators.hpp"

namespace phasesym {

struct Series {
    std::string name;
    std::vector<Complex> values;
    bool complex_valued = false; // real series keep a zero imaginary part
};

struct Snapshot {
    double time = 0.0;
    ComplexMatrix rho;
};

struct TrajectoryDiagnostics {
    double max_trace_drift = 0.0;        // before renormalization, per accepted step
    double max_hermiticity_drift = 0.0;  // before Hermitization, per accepted step
    double max_leakage = 0.0;            // population of the top Fock state
    bool leakage_flagged = false;
    double min_eigenvalue = 0.0;         // smallest eigenvalue of rho over sampled times
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    std::map<std::string, double> conservation_drift; // mean-field invariants
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Series> observables;
    std::vector<Snapshot> snapshots;
    TrajectoryDiagnostics diagnostics;

    const Series& series(const std::string& name) const;
    std::vector<double> real_series(const std::string& name) const;
    double dt() const;
};

// Uniform grid t_k = t_final * k / (count - 1), k = 0..count-1.
std::vector<double> uniform_times(double t_final, std::size_t count);

} // namespace phasesym
