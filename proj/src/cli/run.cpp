#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <toml.hpp>

#include "phasesym/cli.hpp"
#include "phasesym/error.hpp"
#include "phasesym/lindblad.hpp"
#include "phasesym/symmetry.hpp"

namespace phasesym::cli {

namespace {

using json = nlohmann::ordered_json;

// ---- initial states --------------------------------------------------------

MeanFieldState meanfield_initial(const RunConfig& c) {
    const double phi = c.model.params.phi;
    return std::visit(
        [&](const auto& st) -> MeanFieldState {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, PresetState>) {
                if (st.name == "plus-x-product" || st.name == "all-down") {
                    MeanFieldState2S s;
                    s.sa = s.sb = st.name == "all-down" ? Eigen::Vector3d(0, 0, -1) : Eigen::Vector3d(1, 0, 0);
                    return s;
                }
                if (st.name == "dark") return three_level_initial_expectations(0.0, 1.0, phi);
                if (st.name == "bright") return three_level_initial_expectations(1.0, 0.0, phi);
                return three_level_initial_expectations(0.0, 0.0, phi);
            } else if constexpr (std::is_same_v<T, BlochState>) {
                MeanFieldState2S s;
                s.sa = Eigen::Vector3d(st.s_a[0], st.s_a[1], st.s_a[2]);
                s.sb = Eigen::Vector3d(st.s_b[0], st.s_b[1], st.s_b[2]);
                s.alpha = Complex(st.alpha_re, st.alpha_im);
                return s;
            } else {
                return three_level_initial_expectations(st.c_plus, st.c_minus, st.phi_state, st.mapping);
            }
        },
        c.initial_state);
}

ComplexVector product(const ComplexVector& site, int n) {
    ComplexVector v = ComplexVector::Ones(1);
    for (int k = 0; k < n; ++k) v = kron(v, site);
    return v;
}

// Spin-coherent state along a unit Bloch vector, basis m = -j .. j.
ComplexVector coherent_spin(const std::array<double, 3>& s, int n_sites, bool collective) {
    const double theta = std::acos(std::clamp(s[2], -1.0, 1.0));
    const double azimuth = std::atan2(s[1], s[0]);
    const double up = std::cos(theta / 2);
    const Complex down = std::polar(std::sin(theta / 2), azimuth);
    if (!collective) {
        ComplexVector site(2);
        site << down, up;
        return product(site, n_sites);
    }
    ComplexVector v(n_sites + 1);
    for (int k = 0; k <= n_sites; ++k) {
        const double binom =
            std::exp(0.5 * (std::lgamma(n_sites + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_sites - k + 1.0)));
        v(k) = binom * std::pow(up, k) * std::pow(down, n_sites - k);
    }
    return v;
}

ComplexVector cavity_coherent(Complex beta, std::size_t dim) {
    ComplexVector v(static_cast<Eigen::Index>(dim));
    Complex term = 1.0;
    for (std::size_t n = 0; n < dim; ++n) {
        if (n > 0) term *= beta / std::sqrt(double(n));
        v(Eigen::Index(n)) = term;
    }
    return v / v.norm();
}

// Initial pure state on `space` (atoms, then the cavity if present).
ComplexVector exact_initial(const RunConfig& c, const HilbertSpace& space) {
    const double phi = c.model.params.phi;
    HilbertSpace atoms = space;
    atoms.photon_cutoff.reset();
    ComplexVector psi;
    Complex beta = 0.0;
    if (const auto* st = std::get_if<PresetState>(&c.initial_state)) {
        if (st->name == "plus-x-product") {
            psi = plus_x_product(atoms);
        } else if (st->name == "all-down") {
            psi = ComplexVector::Zero(Eigen::Index(atoms.dimension()));
            psi(0) = 1.0;
        } else {
            ComplexVector site = ComplexVector::Zero(3);
            if (st->name == "ground")
                site(level::ground) = 1.0;
            else
                site = three_level_branch(phi, st->name == "bright" ? +1 : -1);
            psi = product(site, atoms.n_atoms);
        }
    } else if (const auto* st = std::get_if<BlochState>(&c.initial_state)) {
        const bool collective = atoms.atoms == AtomKind::TwoSpeciesCollective;
        psi = kron(coherent_spin(st->s_a, atoms.n_a, collective), coherent_spin(st->s_b, atoms.n_b, collective));
        beta = Complex(st->alpha_re, st->alpha_im) * std::sqrt(double(atoms.total_atoms()));
    } else {
        const auto& a = std::get<AmplitudeState>(c.initial_state);
        const double c0 = std::sqrt(std::max(0.0, 1.0 - a.c_plus * a.c_plus - a.c_minus * a.c_minus));
        ComplexVector ground = ComplexVector::Zero(3);
        ground(level::ground) = 1.0;
        const int n = atoms.n_atoms;
        psi = a.c_plus * product(three_level_branch(a.phi_state, +1), n) +
              a.c_minus * product(three_level_branch(a.phi_state, -1), n) + c0 * product(ground, n);
    }
    if (space.photon_cutoff) psi = kron(psi, cavity_coherent(beta, space.cavity_dimension()));
    return psi / psi.norm();
}

// ---- json helpers ----------------------------------------------------------

json number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

json diagnostics_json(const TrajectoryDiagnostics& d) {
    json j;
    j["max_trace_drift"] = number(d.max_trace_drift);
    j["max_hermiticity_drift"] = number(d.max_hermiticity_drift);
    j["max_leakage"] = number(d.max_leakage);
    j["leakage_flagged"] = d.leakage_flagged;
    j["min_eigenvalue"] = number(d.min_eigenvalue);
    j["accepted_steps"] = d.accepted_steps;
    j["rejected_steps"] = d.rejected_steps;
    json drift = json::object();
    for (const auto& [k, v] : d.conservation_drift) drift[k] = number(v);
    j["conservation_drift"] = drift;
    return j;
}

json frequency_json(const Trajectory& t, const std::string& series, const FrequencyOptions& opts) {
    json j;
    try {
        const FrequencyEstimate f = dominant_frequency(t.real_series(series), t.dt(), opts);
        j["omega_tilde"] = number(f.omega_tilde);
        j["peak_amplitude"] = number(f.peak_amplitude);
        j["resolution"] = number(f.resolution);
        j["stationary"] = f.stationary;
    } catch (const ValidationError& e) {
        j["skipped"] = e.what();
    }
    return j;
}

json units_json() {
    return json{{"model.g", "kappa"},
                {"model.eta", "kappa"},
                {"model.kappa", "kappa"},
                {"model.delta_c", "kappa"},
                {"model.delta_a", "kappa"},
                {"model.delta_b", "kappa"},
                {"model.phi", "rad"},
                {"numerics.t_final", "1/kappa"},
                {"trajectory.time", "1/kappa"},
                {"spectrum.eigenvalue", "kappa"},
                {"diagnostics.dominant_frequency.omega_tilde", "kappa"},
                {"sweep.phi", "rad"},
                {"sweep.eta", "g"},
                {"sweep.delta", "g"},
                {"sweep.omega_tilde*", "g"},
                {"sweep.min_re_gap", "kappa"},
                {"sweep.min_candidate_gap", "kappa"}};
}

json config_json(const RunConfig& c) {
    std::ostringstream out;
    out << toml::json_formatter{toml::parse(serialize(c))};
    return json::parse(out.str());
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---- commands ----------------------------------------------------------------

struct Artifact {
    std::string name;
    std::string text;
};

struct CommandResult {
    std::vector<Artifact> files;
    json diagnostics = json::object();
};

MeanFieldOptions meanfield_options(const RunConfig& c) {
    MeanFieldOptions o;
    o.coupling = c.model.coupling;
    o.integrator = c.numerics.integrator;
    o.drift_abort = c.numerics.drift_abort;
    return o;
}

FrequencyOptions frequency_options(const RunConfig& c) {
    FrequencyOptions f;
    f.transient_fraction = c.numerics.transient_fraction;
    f.dc_threshold = c.numerics.dc_threshold;
    return f;
}

ClassifierSettings classifier_settings(const RunConfig& c) {
    ClassifierSettings s;
    s.t_final = c.numerics.t_final;
    s.samples = c.numerics.samples;
    s.frequency = frequency_options(c);
    s.meanfield = meanfield_options(c);
    return s;
}

LindbladModel exact_model(const RunConfig& c) {
    BuildOptions b;
    b.full_space = c.model.full_space;
    b.budget.max_dimension = c.numerics.max_dimension;
    return build_model(c.model.kind, c.model.params, b);
}

CommandResult evolve_mf(const RunConfig& c) {
    const MeanFieldState init = meanfield_initial(c);
    const Trajectory t = mf_evolve(init, c.model.params, c.numerics.t_final, c.numerics.samples, meanfield_options(c));
    CommandResult r;
    r.files.push_back({"trajectory.csv", trajectory_csv(t)});
    r.diagnostics["integration"] = diagnostics_json(t.diagnostics);
    json freq;
    const auto opts = frequency_options(c);
    if (kind_of(init) == MeanFieldKind::TwoSpecies) {
        freq["sz_A"] = frequency_json(t, "sz_A", opts);
        freq["sz_B"] = frequency_json(t, "sz_B", opts);
    } else {
        freq["N_B"] = frequency_json(t, "N_B", opts);
        freq["N_A"] = frequency_json(t, "N_A", opts);
    }
    r.diagnostics["dominant_frequency"] = freq;
    return r;
}

CommandResult evolve_lindblad(const RunConfig& c) {
    const LindbladModel model = exact_model(c);
    const ComplexVector psi = exact_initial(c, model.space);
    EvolveOptions o;
    o.integrator = c.numerics.integrator;
    o.positivity_check = c.numerics.positivity_check;
    o.leakage_threshold = c.numerics.leakage_threshold;
    const Trajectory t = evolve_density_matrix(model, psi * psi.adjoint(), c.numerics.t_final, c.numerics.samples, o);
    CommandResult r;
    r.files.push_back({"trajectory.csv", trajectory_csv(t)});
    r.diagnostics["model_hash"] = model_fingerprint(model);
    r.diagnostics["dimension"] = model.dimension();
    r.diagnostics["space"] = model.space.describe();
    r.diagnostics["integration"] = diagnostics_json(t.diagnostics);
    return r;
}

CommandResult spectrum_command(const RunConfig& c) {
    const LindbladModel model = exact_model(c);
    const SpectrumResult s = spectrum(model, false, LiouvillianBudget{c.numerics.liouvillian_max_dimension});
    CommandResult r;
    r.files.push_back({"spectrum.csv", spectrum_csv(s)});
    r.diagnostics["model_hash"] = s.model_hash;
    r.diagnostics["dimension"] = s.dimension;
    r.diagnostics["kernel_dimension"] = s.kernel_dimension();
    const auto& p = c.model.params;
    if (p.delta_a != 0.0 && p.delta_a == p.delta_b) {
        const auto modes = dfs_detect(s, p.delta_a);
        json list = json::array();
        for (const auto& m : modes)
            list.push_back({{"eigenvalue_re", number(m.eigenvalue.real())},
                            {"eigenvalue_im", number(m.eigenvalue.imag())},
                            {"class", m.classification == DfsClass::Dfs ? "dfs" : "edfs-candidate"}});
        r.diagnostics["dfs_pairs"] = count_dfs_pairs(modes);
        r.diagnostics["dfs_modes"] = list;
    }
    return r;
}

CommandResult weights_command(const RunConfig& c) {
    HilbertSpace space = exact_model(c).space;
    space.photon_cutoff.reset();
    const ComplexVector psi = exact_initial(c, space);
    const double phi = c.model.params.phi;
    const SectorDecomposition sectors =
        space.is_two_species()
            ? casimir_sectors(space, phi)
            : hermitian_sectors(three_level_operators(space, phi, OperatorBudget{c.numerics.max_dimension}).tau_total,
                                1e-8);
    const WeightReport w = sector_weights(psi, sectors);
    std::vector<WeightRow> rows;
    for (std::size_t k = 0; k < w.weights.size(); ++k)
        rows.push_back({w.weights[k].first, sectors.multiplicities[k], w.weights[k].second});
    CommandResult r;
    r.files.push_back({"weights.csv", weights_csv(rows)});
    r.diagnostics["label_meaning"] = space.is_two_species() ? "S(S+1) of the phase-twisted total spin"
                                                            : "eigenvalue of the summed single-atom tau operator";
    r.diagnostics["w_max"] = number(w.w_max);
    r.diagnostics["complement"] = number(w.complement);
    return r;
}

SweepSpec sweep_spec(const RunConfig& c) {
    const SweepConfig& w = *c.sweep;
    const ModelParams& p = c.model.params;
    if (w.type == "eta-phi-map")
        return EtaPhiMapSpec{p, meanfield_initial(c), *w.phi, *w.eta_over_g, classifier_settings(c),
                             w.nonstationary_threshold};
    if (w.type == "weight-vs-phi") return WeightVsPhiSpec{p.n_a + p.n_b, *w.phi, c.model.full_space};
    if (w.type == "initial-state-map")
        return InitialStateMapSpec{p,         w.phi_state, w.mapping, *w.c_plus, *w.c_minus, classifier_settings(c),
                                   w.nonstationary_threshold};
    if (w.type == "dfs-map")
        return DfsMapSpec{c.model.kind,      p, c.model.full_space, *w.eta_over_g, *w.delta_over_g,
                          w.antisymmetric_detuning, LiouvillianBudget{c.numerics.liouvillian_max_dimension}};
    return GapScalingSpec{p, w.n_list, w.resolution, LiouvillianBudget{c.numerics.liouvillian_max_dimension}};
}

CommandResult sweep_command(const RunConfig& c, int jobs) {
    const SweepResult s = sweep(sweep_spec(c), SweepRunOptions{kernels::Exec::Parallel, jobs});
    CommandResult r;
    r.files.push_back({"sweep.csv", sweep_csv(s)});
    json failed = json::array();
    for (std::size_t k = 0; k < s.points.size(); ++k) {
        if (s.points[k].ok) continue;
        json coords = json::array();
        for (double x : s.points[k].coords) coords.push_back(number(x));
        failed.push_back({{"index", k}, {"coords", coords}, {"error", s.points[k].error}});
    }
    r.diagnostics["sweep_type"] = s.type;
    r.diagnostics["points"] = s.points.size();
    r.diagnostics["failed_points"] = failed;
    return r;
}

CommandResult dispatch(const RunConfig& c, int jobs) {
    switch (c.command) {
    case Command::EvolveMf: return evolve_mf(c);
    case Command::EvolveLindblad: return evolve_lindblad(c);
    case Command::Spectrum: return spectrum_command(c);
    case Command::Weights: return weights_command(c);
    case Command::Sweep: return sweep_command(c, jobs);
    }
    throw ValidationError("unhandled command");
}

void prepare_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
}

} // namespace

std::filesystem::path resolve_output_dir(const RunConfig& config, const RunOptions& options) {
    if (options.out_dir) return *options.out_dir;
    if (!config.output.dir.empty()) return config.output.dir;
    const std::string name = config.preset.empty() ? to_string(config.command) : config.preset;
    if (const char* root = std::getenv(kOutputRootEnv); root && *root) return std::filesystem::path(root) / name;
    return std::filesystem::path("phasesym-out") / name;
}

RunOutcome run(const RunConfig& config, const RunOptions& options) {
    validate(config);
    RunOutcome out;
    out.directory = resolve_output_dir(config, options);

    json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["command"] = to_string(config.command);
    meta["preset"] = config.preset;
    meta["started_utc"] = utc_now();
    meta["jobs"] = options.jobs;
    meta["threads_available"] = kernels::max_threads();

    const auto t0 = std::chrono::steady_clock::now();
    CommandResult result;
    try {
        result = dispatch(config, options.jobs);
        meta["status"] = "ok";
    } catch (const NumericalError& e) {
        meta["status"] = "numerical-failure";
        meta["message"] = e.what();
        out.exit_code = kNumericalFailure;
        out.message = e.what();
    }
    meta["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    meta["units"] = units_json();
    meta["config"] = config_json(config);
    meta["config_toml"] = serialize(config);
    meta["diagnostics"] = result.diagnostics;

    prepare_directory(out.directory);
    json names = json::array();
    for (const auto& f : result.files) {
        write_text_file(out.directory / f.name, f.text);
        out.artifacts.push_back(out.directory / f.name);
        names.push_back(f.name);
    }
    meta["artifacts"] = names;
    write_text_file(out.directory / "meta.json", meta.dump(2) + "\n");
    out.artifacts.push_back(out.directory / "meta.json");
    return out;
}

int main_entry(int argc, char** argv) {
    CLI::App app{"phasesym: mean-field, Lindblad and spectral runs for two-species and three-level cavity models"};
    std::string command, config_path, preset, out_dir;
    int jobs = 0;
    bool list_presets = false, print_config = false;
    app.add_option("command", command, "evolve-mf | evolve-lindblad | spectrum | weights | sweep");
    app.add_option("--config", config_path, "TOML run configuration");
    app.add_option("--jobs", jobs, "worker threads for sweep grid points");
    app.add_option("--out", out_dir, "output directory (overrides config and $" + std::string(kOutputRootEnv) + ")");
    app.add_option("--preset", preset, "named base configuration, overlaid by --config");
    app.add_flag("--list-presets", list_presets, "print preset names and exit");
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidationError;
    }

    try {
        if (list_presets) {
            for (const auto& n : preset_names()) std::cout << n << '\n';
            return kOk;
        }
        if (config_path.empty() && preset.empty()) throw ValidationError("need --config or --preset");
        if (jobs < 0) throw ValidationError("--jobs must be non-negative");
        std::string text;
        if (!config_path.empty()) {
            std::ifstream f(config_path, std::ios::binary);
            if (!f) throw ValidationError("cannot read config file " + config_path);
            std::ostringstream buf;
            buf << f.rdbuf();
            text = buf.str();
        }
        const RunConfig config = resolve_config(
            text, preset, command.empty() ? std::nullopt : std::optional<Command>(command_from_string(command)));
        if (print_config) {
            std::cout << serialize(config);
            return kOk;
        }
        RunOptions options;
        options.jobs = jobs;
        if (!out_dir.empty()) options.out_dir = out_dir;
        const RunOutcome outcome = run(config, options);
        if (outcome.exit_code != kOk) {
            std::cerr << "phasesym: numerical failure: " << outcome.message << " (details in "
                      << (outcome.directory / "meta.json").string() << ")\n";
            return outcome.exit_code;
        }
        for (const auto& a : outcome.artifacts) std::cout << a.string() << '\n';
        return kOk;
    } catch (const ValidationError& e) {
        std::cerr << "phasesym: invalid input: " << e.what() << '\n';
        return kValidationError;
    } catch (const NumericalError& e) {
        std::cerr << "phasesym: numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "phasesym: internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

} // namespace phasesym::cli
