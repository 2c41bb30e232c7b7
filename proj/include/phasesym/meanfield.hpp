#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "phasesym/integrator.hpp"
#include "phasesym/models.hpp"
#include "phasesym/trajectory.hpp"

namespace phasesym {

enum class MeanFieldKind { TwoSpecies, ThreeLevel };

// Single-atom coupling operator J of the three-level mean field.
//   Lambda: J = |0><A| + e^{-i phi} |0><B|   (same as the exact models)
//   Ladder: J = |0><A| + e^{-i phi} |B><0|   (the alternative Gell-Mann EOM list)
enum class ThreeLevelCoupling { Lambda, Ladder };

// How the N-atom superposition c+|+>^N + c-|->^N + c0|0>^N maps to one atom.
enum class InitialStateMapping { PureSingleAtom, ReducedMixture };

std::string to_string(ThreeLevelCoupling c);
ThreeLevelCoupling coupling_from_string(const std::string& name);
std::string to_string(InitialStateMapping m);
InitialStateMapping mapping_from_string(const std::string& name);

// alpha = <a>/sqrt(N); s_m = <S_m>/(N_m/2)
struct MeanFieldState2S {
    Complex alpha{0.0, 0.0};
    Eigen::Vector3d sa = Eigen::Vector3d::Zero();
    Eigen::Vector3d sb = Eigen::Vector3d::Zero();
};

struct MeanFieldState3L {
    Complex alpha{0.0, 0.0};
    std::array<double, 8> lambda{}; // <l_1> .. <l_8>
};

using MeanFieldState = std::variant<MeanFieldState2S, MeanFieldState3L>;

MeanFieldKind kind_of(const MeanFieldState& s);

// Packed layouts: two-species [sAx sAy sAz sBx sBy sBz Re(a) Im(a)],
// three-level [l1..l8 Re(a) Im(a)].
Eigen::VectorXd pack(const MeanFieldState& s);
MeanFieldState unpack(MeanFieldKind kind, const Eigen::VectorXd& y);

void validate_state(const MeanFieldState& s);

MeanFieldState mf_rhs(const MeanFieldState& state, const ModelParams& p,
                      ThreeLevelCoupling coupling = ThreeLevelCoupling::Lambda);
void mf_rhs_packed(MeanFieldKind kind, const ModelParams& p, ThreeLevelCoupling coupling, const Eigen::VectorXd& y,
                   Eigen::VectorXd& dy);
// Analytic Jacobian of mf_rhs_packed.
Eigen::MatrixXd mf_jacobian(MeanFieldKind kind, const ModelParams& p, ThreeLevelCoupling coupling,
                            const Eigen::VectorXd& y);

struct MeanFieldOptions {
    ThreeLevelCoupling coupling = ThreeLevelCoupling::Lambda;
    IntegratorOptions integrator{IntegratorMethod::Rk45Adaptive, 0.1, 1e-9, 1e-11, 1e-10, 200'000'000};
    double drift_abort = 1e-4;
};

Trajectory mf_evolve(const MeanFieldState& init, const ModelParams& p, double t_final, std::size_t sample_count,
                     const MeanFieldOptions& opts = {});

MeanFieldState3L three_level_initial_expectations(double c_plus, double c_minus, double phi_state,
                                                  InitialStateMapping mapping = InitialStateMapping::PureSingleAtom);

// Single-atom density matrix I/3 + 2 sum_a <l_a> l_a and its inverse map.
ComplexMatrix density_from_gell_mann(const std::array<double, 8>& lambda);
std::array<double, 8> gell_mann_expectations(const ComplexMatrix& rho);

double casimir_c2(const std::array<double, 8>& lambda);
double casimir_c3(const std::array<double, 8>& lambda);

struct Populations {
    double n_a = 0.0, n_0 = 0.0, n_b = 0.0;
};
Populations populations(const std::array<double, 8>& lambda);

} // namespace phasesym
