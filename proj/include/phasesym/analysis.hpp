#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phasesym/kernels.hpp"
#include "phasesym/lindblad.hpp"
#include "phasesym/meanfield.hpp"

namespace phasesym {

struct FrequencyOptions {
    double transient_fraction = 0.5;
    double dc_threshold = 1e-3;
    double amplitude_floor = 1e-6; // absolute peak amplitude below which a series counts as flat
    std::size_t min_samples = 256;
    std::size_t zero_padding = 1;  // FFT length multiplier; refines the peak position, not the resolution
};

struct FrequencyEstimate {
    double omega_tilde = 0.0;    // angular frequency in the series' inverse time unit
    double peak_amplitude = 0.0; // Hann-corrected peak amplitude over the reference level
    double resolution = 0.0;     // 2 pi / window length
    bool stationary = true;
};

// Reference level for the amplitude gate is max(|mean|, max|x|) over the
// analysed window, so a series relaxing to zero is not divided by ~0.
FrequencyEstimate dominant_frequency(const std::vector<double>& series, double dt, const FrequencyOptions& opts = {});

// Settings shared by every mean-field classification run.
struct ClassifierSettings {
    double t_final = 2e4;         // 1/kappa
    std::size_t samples = 8192;
    FrequencyOptions frequency;
    MeanFieldOptions meanfield;
};

struct DriveProbe {
    double eta = 0.0;
    FrequencyEstimate a;
    FrequencyEstimate b;
    bool nonstationary() const { return !a.stationary; }
};

struct CriticalDriveResult {
    double eta_c = 0.0;
    std::vector<DriveProbe> probes; // every bracket end and midpoint evaluated
};

// Classifies the two-species mean field at drive eta (kappa units).
DriveProbe classify_drive(const ModelParams& p, const MeanFieldState2S& init, double eta,
                          const ClassifierSettings& settings);

// Bisection on eta between a stationary and a non-stationary bracket end.
CriticalDriveResult critical_drive(double phi, const ModelParams& p, const MeanFieldState2S& init,
                                   std::pair<double, double> eta_bracket, double tol,
                                   const ClassifierSettings& settings);

// ---- spectra -------------------------------------------------------------

enum class DfsClass { Dfs, EdfsCandidate };

struct DfsMode {
    Complex eigenvalue;
    DfsClass classification;
};

struct DfsCriteria {
    double re_tolerance = 1e-8;
    double im_tolerance = 1e-6;
    double candidate_window = 1e-3;
};

std::vector<DfsMode> dfs_detect(const SpectrumResult& spec, double delta, const DfsCriteria& criteria = {});
std::size_t count_dfs_pairs(const std::vector<DfsMode>& modes);

Complex mode_amplitude(const SpectrumResult& spec, const ComplexMatrix& rho0, const ComplexMatrix& observable,
                       std::size_t mode_index);

// min |Re lambda| over eigenvalues with ||Im lambda| - |delta|| < resolution; NaN when none.
double min_gap_near(const SpectrumResult& spec, double delta, double resolution);

// ---- sweeps --------------------------------------------------------------

struct Grid {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;
    std::vector<double> values() const;
    bool operator==(const Grid&) const = default;
};

// Two-species runs classify s^z_A / s^z_B; three-level runs classify N_B and
// mark points with omega_tilde_NB / g >= nonstationary_threshold.
struct EtaPhiMapSpec {
    ModelParams base;
    MeanFieldState init = MeanFieldState2S{};
    Grid phi;
    Grid eta_over_g;
    ClassifierSettings settings;
    double nonstationary_threshold = 0.01;
};

struct WeightVsPhiSpec {
    int n_total = 4;
    Grid phi;
    bool full_space = false;
};

struct InitialStateMapSpec {
    ModelParams base; // eta and phi of the model are taken from here
    double phi_state = 0.0;
    InitialStateMapping mapping = InitialStateMapping::PureSingleAtom;
    Grid c_plus;
    Grid c_minus;
    ClassifierSettings settings;
    double nonstationary_threshold = 0.01; // omega_tilde_NB / g
};

struct DfsMapSpec {
    ModelKind kind = ModelKind::SpinOnly;
    ModelParams base;
    bool full_space = false;
    Grid eta_over_g;
    Grid delta_over_g; // sets delta_a = delta_b (or delta_a = -delta_b when antisymmetric)
    bool antisymmetric_detuning = false;
    LiouvillianBudget budget;
};

struct GapScalingSpec {
    ModelParams base; // delta_a = -delta_b is enforced from |delta_a|
    std::vector<int> n_list;
    double resolution = 1e-3;
    LiouvillianBudget budget{128};
};

using SweepSpec = std::variant<EtaPhiMapSpec, WeightVsPhiSpec, InitialStateMapSpec, DfsMapSpec, GapScalingSpec>;

std::string sweep_type_name(const SweepSpec& spec);

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct SweepPoint {
    std::vector<double> coords;
    std::vector<double> values; // NaN for failed points
    bool ok = true;
    std::string error;
};

struct SweepResult {
    std::string type;
    std::vector<SweepAxis> axes;
    std::vector<std::string> value_names;
    std::vector<SweepPoint> points; // grid order, last axis fastest
    std::string provenance;         // resolved config text, filled by the caller
};

struct SweepRunOptions {
    kernels::Exec exec = kernels::Exec::Parallel;
    int jobs = 0;
};

SweepResult sweep(const SweepSpec& spec, const SweepRunOptions& run = {});

} // namespace phasesym
