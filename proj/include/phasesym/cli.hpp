#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phasesym/analysis.hpp"
#include "phasesym/integrator.hpp"
#include "phasesym/meanfield.hpp"
#include "phasesym/models.hpp"

namespace phasesym::cli {

inline constexpr std::string_view kToolName = "phasesym";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr const char* kOutputRootEnv = "PHASESYM_OUTPUT_ROOT";

enum ExitCode : int { kOk = 0, kInternalError = 1, kValidationError = 2, kNumericalFailure = 3 };

enum class Command { EvolveMf, EvolveLindblad, Spectrum, Weights, Sweep };

std::string to_string(Command c);
Command command_from_string(const std::string& name);

// ---- configuration ---------------------------------------------------------

struct ModelConfig {
    ModelKind kind = ModelKind::SpinOnly;
    ModelParams params;
    bool full_space = false;
    ThreeLevelCoupling coupling = ThreeLevelCoupling::Lambda;

    bool operator==(const ModelConfig&) const = default;
};

// Named states: plus-x-product, all-down (two-species); dark, bright, ground (three-level).
struct PresetState {
    std::string name = "plus-x-product";
    bool operator==(const PresetState&) const = default;
};

// Bloch vectors per species plus the scaled cavity amplitude alpha = <a>/sqrt(N).
struct BlochState {
    std::array<double, 3> s_a{1.0, 0.0, 0.0};
    std::array<double, 3> s_b{1.0, 0.0, 0.0};
    double alpha_re = 0.0;
    double alpha_im = 0.0;
    bool operator==(const BlochState&) const = default;
};

// c+|+>^N + c-|->^N + c0|0>^N with branches taken at phi_state.
struct AmplitudeState {
    double c_plus = 0.0;
    double c_minus = 0.0;
    double phi_state = 0.0;
    InitialStateMapping mapping = InitialStateMapping::PureSingleAtom;
    bool operator==(const AmplitudeState&) const = default;
};

using InitialStateConfig = std::variant<PresetState, BlochState, AmplitudeState>;

struct NumericsConfig {
    IntegratorOptions integrator{IntegratorMethod::Rk45Adaptive, 0.01, 1e-9, 1e-11, 1e-12, 200'000'000};
    double t_final = 100.0; // 1/kappa
    std::size_t samples = 1001;
    double transient_fraction = 0.5;
    double dc_threshold = 1e-3;
    double drift_abort = 1e-4;
    bool positivity_check = true;
    double leakage_threshold = 1e-6;
    std::size_t max_dimension = 2048;          // Hilbert-space budget for operators
    std::size_t liouvillian_max_dimension = 64; // Hilbert-space budget for dense superoperators

    bool operator==(const NumericsConfig&) const = default;
};

struct SweepConfig {
    std::string type = "eta-phi-map";
    std::optional<Grid> phi;          // rad
    std::optional<Grid> eta_over_g;
    std::optional<Grid> c_plus;
    std::optional<Grid> c_minus;
    std::optional<Grid> delta_over_g;
    std::vector<int> n_list;
    double phi_state = 0.0;
    InitialStateMapping mapping = InitialStateMapping::PureSingleAtom;
    double nonstationary_threshold = 0.01; // omega_tilde / g
    bool antisymmetric_detuning = false;
    double resolution = 1e-3;              // kappa

    bool operator==(const SweepConfig&) const = default;
};

struct OutputConfig {
    std::string dir; // empty: --out, then $PHASESYM_OUTPUT_ROOT/<run name>, then ./phasesym-out/<run name>
    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    Command command = Command::EvolveMf;
    std::string preset; // informational; empty when none was used
    ModelConfig model;
    InitialStateConfig initial_state = PresetState{};
    NumericsConfig numerics;
    std::optional<SweepConfig> sweep;
    OutputConfig output;

    bool operator==(const RunConfig&) const = default;
};

// Parses a complete config; the text must carry `command`.
RunConfig parse_config(std::string_view toml_text);

// Overlays `config_text` (may be empty) on the named preset (may be empty) and
// fills the command. Conflicting commands and unknown keys are validation errors.
RunConfig resolve_config(std::string_view config_text, const std::string& preset, std::optional<Command> command);

std::string serialize(const RunConfig& config);

// Cross-field checks that need the whole config (state vs model kind, sweep keys).
void validate(const RunConfig& config);

// ---- presets -----------------------------------------------------------------

const std::vector<std::string>& preset_names();
// TOML text of a preset; throws ValidationError for unknown names.
std::string preset_text(const std::string& name);

// ---- output ------------------------------------------------------------------

// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double v);

std::string trajectory_csv(const Trajectory& t);
std::string spectrum_csv(const SpectrumResult& s);
std::string sweep_csv(const SweepResult& r);

struct WeightRow {
    double label = 0.0;
    std::size_t multiplicity = 0;
    double weight = 0.0;
};
std::string weights_csv(const std::vector<WeightRow>& rows);

// Writes via a temporary file and rename.
void write_text_file(const std::filesystem::path& path, const std::string& text);

// ---- running -----------------------------------------------------------------

struct RunOptions {
    int jobs = 0; // sweep points only; <= 0 uses the OpenMP default
    std::optional<std::filesystem::path> out_dir;
};

struct RunOutcome {
    int exit_code = kOk;
    std::filesystem::path directory;
    std::vector<std::filesystem::path> artifacts;
    std::string message;
};

std::filesystem::path resolve_output_dir(const RunConfig& config, const RunOptions& options);

// Executes the command. Validation problems throw before anything is written;
// numerical failures are caught and reported in meta.json with exit code 3.
RunOutcome run(const RunConfig& config, const RunOptions& options);

// Full command-line entry point; returns the process exit code.
int main_entry(int argc, char** argv);

} // namespace phasesym::cli
