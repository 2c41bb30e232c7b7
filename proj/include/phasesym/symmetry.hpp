#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "phasesym/models.hpp"

namespace phasesym {

struct SectorDecomposition {
    std::vector<double> labels;           // S(S+1) values ascending, or -1/+1 for tau
    std::vector<ComplexMatrix> projectors;
    std::vector<std::size_t> multiplicities;
};

struct WeightReport {
    std::vector<std::pair<double, double>> weights; // (label, weight), label order of the decomposition
    double w_max = 0.0;                             // weight of the largest label
    double complement = 0.0;
};

// Sectors of the Casimir S^2_phi on a two-species space (atomic factor only).
SectorDecomposition casimir_sectors(const HilbertSpace& space, double phi, double tol = 1e-8);

// Groups the eigen-decomposition of a Hermitian operator into clusters.
SectorDecomposition hermitian_sectors(const ComplexMatrix& op, double tol);

WeightReport sector_weights(const ComplexMatrix& rho, const SectorDecomposition& sectors);
WeightReport sector_weights(const ComplexVector& psi, const SectorDecomposition& sectors);

SectorDecomposition tau_eigensystem(double phi);

// |+x> product state on a two-species space (atomic factor only).
ComplexVector plus_x_product(const HilbertSpace& space);

struct BrightDarkWeights {
    double w_plus = 0.0;
    double w_minus = 0.0;
};

// Weights of c+|+>^N + c-|->^N + c0|0>^N (branches at phi_state) on the product
// projectors onto the +1 / -1 tau eigenspaces at phi_projector.
BrightDarkWeights bright_dark_weights(double c_plus, double c_minus, int n, double phi_state, double phi_projector);

struct SingletOverlap {
    Complex closed_form;
    Complex explicit_vectors;
};

// <S^phi|+x +x> for the two-atom state annihilated by sigma_A^- + e^{-i phi} sigma_B^-.
SingletOverlap singlet_overlap(double phi);

struct SymmetryResiduals {
    double h_residual = 0.0;
    std::vector<double> jump_residuals;

    bool is_strong(double tol = 1e-10) const;
};

SymmetryResiduals symmetry_residuals(const LindbladModel& model, const ComplexMatrix& a);

// The model's natural strong-symmetry candidate lifted to its full space:
// S^2_phi for two-species models, T^phi for three-level models.
ComplexMatrix symmetry_operator(const LindbladModel& model, double phi);

} // namespace phasesym
