#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace phasesym {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class AtomKind { TwoSpeciesCollective, TwoSpeciesFull, ThreeLevelFull };

enum class SpaceKind { TwoSpeciesCollective, TwoSpeciesFull, ThreeLevelFull, WithCavity };

// Tensor layout: atoms first, cavity (if any) last. Two-species spaces put
// species A before species B; full spaces order sites A_1..A_nA, B_1..B_nB.
struct HilbertSpace {
    AtomKind atoms = AtomKind::TwoSpeciesCollective;
    int n_a = 0;                    // two-species only
    int n_b = 0;                    // two-species only
    int n_atoms = 0;                // three-level only
    std::optional<int> photon_cutoff;

    static HilbertSpace two_species_collective(int n_a, int n_b);
    static HilbertSpace two_species_full(int n_a, int n_b);
    static HilbertSpace three_level_full(int n_atoms);
    HilbertSpace with_cavity(int n_max) const;

    SpaceKind kind() const;
    bool is_two_species() const { return atoms != AtomKind::ThreeLevelFull; }
    int total_atoms() const { return is_two_species() ? n_a + n_b : n_atoms; }
    std::size_t atomic_dimension() const;
    std::size_t cavity_dimension() const { return photon_cutoff ? std::size_t(*photon_cutoff) + 1 : 1; }
    std::size_t dimension() const { return atomic_dimension() * cavity_dimension(); }
    std::string describe() const;
};

// Refuses operator families whose dense dimension exceeds max_dimension.
struct OperatorBudget {
    std::size_t max_dimension = 2048;
};

void check_budget(const HilbertSpace& space, const OperatorBudget& budget);

// ---- tensor algebra -------------------------------------------------------

enum class TensorOp { Kron, Dagger, Commutator, Anticommutator };

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor_algebra(TensorOp op, const ComplexMatrix& a, const ComplexMatrix* b = nullptr);

double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);
ComplexMatrix identity(std::size_t dim);

// ---- spin and SU(3) -------------------------------------------------------

struct SpinMatrices {
    ComplexMatrix jx, jy, jz, jplus, jminus;
};

// j must be a non-negative half-integer; basis ordered m = -j .. +j.
SpinMatrices spin_matrices(double j);

// Gell-Mann matrices with the 1/2 normalization, Tr(l_a l_b) = delta_ab / 2,
// over the single-atom basis (|A>, |0>, |B>).
const std::array<ComplexMatrix, 8>& gell_mann_basis();

// Tabulated structure constants f_abc (0-based indices), fully antisymmetric.
const std::array<std::array<std::array<double, 8>, 8>, 8>& su3_structure_constants();

// d_abc = Tr({l_a, l_b} l_c) / 4, computed numerically from gell_mann_basis().
const std::array<std::array<std::array<double, 8>, 8>, 8>& su3_symmetric_constants();

namespace level {
inline constexpr int A = 0;
inline constexpr int ground = 1;
inline constexpr int B = 2;
} // namespace level

ComplexMatrix three_level_projector(int row, int col); // |row><col|

// |+-> = (|B> +- e^{-i phi}|A>)/sqrt(2): the bright (+) and dark (-) branches.
ComplexVector three_level_branch(double phi, int sign);

// tau^phi = |0><0| + e^{-i phi}|A><B| + e^{i phi}|B><A|
ComplexMatrix tau_single(double phi);

// ---- collective operators -------------------------------------------------

struct TwoSpeciesOperators {
    ComplexMatrix sa_x, sa_y, sa_z, sa_plus, sa_minus;
    ComplexMatrix sb_x, sb_y, sb_z, sb_plus, sb_minus;
    ComplexMatrix s_phi;      // S_A^- + e^{-i phi} S_B^-
    ComplexMatrix s_phi_dag;
    ComplexMatrix sz_phi;     // (S^dag S - S S^dag) / 2
    ComplexMatrix casimir;    // (S S^dag + S^dag S)/2 + (S^z)^2
};

struct ThreeLevelOperators {
    ComplexMatrix lambda_a;   // sum_j |0><A|_j
    ComplexMatrix lambda_b;   // sum_j |0><B|_j
    ComplexMatrix lambda_phi; // lambda_a + e^{-i phi} lambda_b
    ComplexMatrix n_a, n_b, n_0;
    ComplexMatrix tau_total;  // sum_j tau^phi_j
};

// Operators act on the atomic factor only; use embed_atomic for cavity spaces.
TwoSpeciesOperators two_species_operators(const HilbertSpace& space, double phi,
                                          const OperatorBudget& budget = {});
ThreeLevelOperators three_level_operators(const HilbertSpace& space, double phi,
                                          const OperatorBudget& budget = {});

// Lifts an atomic operator into the full space (identity on the cavity).
ComplexMatrix embed_atomic(const ComplexMatrix& atomic, const HilbertSpace& space);
// Cavity annihilation operator on the full space.
ComplexMatrix cavity_annihilation(const HilbertSpace& space);
// |n_max><n_max| on the cavity, identity on atoms.
ComplexMatrix cavity_top_projector(const HilbertSpace& space);

// Operator acting as `op` on one site of an n-site product of d-level systems.
ComplexMatrix site_operator(const ComplexMatrix& op, int site, int n_sites);

} // namespace phasesym
