#pragma once

#include <string>
#include <utility>
#include <vector>

#include "phasesym/operators.hpp"

namespace phasesym {

// Rates and frequencies in units of kappa; time in 1/kappa.
struct ModelParams {
    double g = 0.1;
    double phi = 0.0;
    double eta = 0.0;
    double kappa = 1.0;
    double delta_c = 0.0;
    double delta_a = 0.0;
    double delta_b = 0.0;
    int n_a = 1;        // two-species atom counts
    int n_b = 1;
    int n_atoms = 2;    // three-level atom count
    int n_max = 10;
    bool include_lamb_shift = false;

    // Sets n_a = n_b = n / 2; n must be even.
    void set_two_species_total(int n);
    void validate() const;
    bool operator==(const ModelParams&) const = default;
};

// Wraps an angle into [-pi, pi].
double normalize_phase(double phi);

struct AdiabaticParams {
    Complex chi_bar;
    double gamma = 0.0;
    Complex drive_amp;
    double lamb_coeff = 0.0;
    bool timescales_separated = true;
    std::string warning;
};

// `n_atoms` enters only through the Lamb-shift coefficient.
AdiabaticParams adiabatic_parameters(const ModelParams& p, int n_atoms);

enum class ModelKind { TwoSpeciesCavity, SpinOnly, ThreeLevelEffective, ThreeLevelCavity };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);
bool is_two_species(ModelKind kind);

struct JumpOperator {
    double rate = 0.0;
    ComplexMatrix op;
    std::string label;
};

struct NamedOperator {
    std::string name;
    ComplexMatrix op;
};

struct LindbladModel {
    HilbertSpace space;
    ComplexMatrix hamiltonian;
    std::vector<JumpOperator> jumps;
    std::vector<NamedOperator> observables; // ordered; order is the CSV column order
    std::string leakage_observable;         // empty when the space has no cavity

    std::size_t dimension() const { return space.dimension(); }
    const ComplexMatrix& observable(const std::string& name) const;
};

struct BuildOptions {
    bool full_space = false; // spin-only on the 2^N product space instead of collective spins
    OperatorBudget budget;
};

LindbladModel build_model(ModelKind kind, const ModelParams& p, const BuildOptions& opts = {});

// Checks H hermiticity, non-negative rates and observable shapes.
void validate_model(const LindbladModel& model);

// FNV-1a over the Hamiltonian and jump data, as 16 hex digits.
std::string model_fingerprint(const LindbladModel& model);

} // namespace phasesym
