#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "phasesym/cli.hpp"
#include "phasesym/error.hpp"

namespace phasesym::cli {

namespace {

constexpr const char* kCommands[] = {"evolve-mf", "evolve-lindblad", "spectrum", "weights", "sweep"};

// Reads one TOML table and remembers which keys were consumed, so leftovers
// can be reported as unknown.
class Section {
public:
    Section(const toml::table& table, std::string path) : table_(table), path_(std::move(path)) {}

    bool has(const std::string& key) const { return table_.contains(key); }

    void read(const std::string& key, double& out) {
        const toml::node* n = take(key);
        if (!n) return;
        if (auto v = n->as_floating_point())
            out = v->get();
        else if (auto i = n->as_integer())
            out = double(i->get());
        else
            fail(key, "a number");
    }

    void read(const std::string& key, int& out) {
        const toml::node* n = take(key);
        if (!n) return;
        auto i = n->as_integer();
        if (!i) fail(key, "an integer");
        if (i->get() < std::numeric_limits<int>::min() || i->get() > std::numeric_limits<int>::max())
            fail(key, "an integer in range");
        out = int(i->get());
    }

    void read(const std::string& key, std::size_t& out) {
        const toml::node* n = take(key);
        if (!n) return;
        auto i = n->as_integer();
        if (!i || i->get() < 0) fail(key, "a non-negative integer");
        out = std::size_t(i->get());
    }

    void read(const std::string& key, bool& out) {
        const toml::node* n = take(key);
        if (!n) return;
        auto b = n->as_boolean();
        if (!b) fail(key, "a boolean");
        out = b->get();
    }

    void read(const std::string& key, std::string& out) {
        const toml::node* n = take(key);
        if (!n) return;
        auto s = n->as_string();
        if (!s) fail(key, "a string");
        out = s->get();
    }

    void read(const std::string& key, std::array<double, 3>& out) {
        const toml::node* n = take(key);
        if (!n) return;
        auto a = n->as_array();
        if (!a || a->size() != 3) fail(key, "an array of three numbers");
        for (std::size_t i = 0; i < 3; ++i) {
            const toml::node& e = *a->get(i);
            if (auto f = e.as_floating_point())
                out[i] = f->get();
            else if (auto k = e.as_integer())
                out[i] = double(k->get());
            else
                fail(key, "an array of three numbers");
        }
    }

    void read(const std::string& key, std::vector<int>& out) {
        const toml::node* n = take(key);
        if (!n) return;
        auto a = n->as_array();
        if (!a) fail(key, "an array of integers");
        out.clear();
        for (const toml::node& e : *a) {
            auto k = e.as_integer();
            if (!k) fail(key, "an array of integers");
            out.push_back(int(k->get()));
        }
    }

    void read(const std::string& key, std::optional<Grid>& out) {
        if (!has(key)) return;
        Section g = subsection(key);
        Grid grid;
        if (!g.has("start") || !g.has("stop") || !g.has("count"))
            throw ValidationError(g.path_ + " needs start, stop and count");
        g.read("start", grid.start);
        g.read("stop", grid.stop);
        g.read("count", grid.count);
        g.finish();
        out = grid;
    }

    Section subsection(const std::string& key) {
        const toml::node* n = take(key);
        auto t = n ? n->as_table() : nullptr;
        if (!t) throw ValidationError(qualified(key) + " must be a table");
        return Section(*t, qualified(key));
    }

    void require(const std::string& key) const {
        if (!has(key)) throw ValidationError("missing required key " + qualified(key));
    }

    // Rejects every key that was not read.
    void finish() const {
        for (auto&& [k, v] : table_) {
            const std::string key(k.str());
            if (!seen_.count(key)) throw ValidationError("unknown key " + qualified(key));
        }
    }

    void forbid_except(const std::set<std::string>& allowed, const std::string& context) const {
        for (auto&& [k, v] : table_) {
            const std::string key(k.str());
            if (!allowed.count(key)) throw ValidationError("key " + qualified(key) + " is not valid for " + context);
        }
    }

private:
    const toml::node* take(const std::string& key) {
        seen_.insert(key);
        return table_.get(key);
    }

    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ValidationError(qualified(key) + " must be " + what);
    }

    const toml::table& table_;
    std::string path_;
    std::set<std::string> seen_;
};

toml::table parse_table(std::string_view text, const std::string& origin) {
    try {
        return toml::parse(text, origin);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "cannot parse " << origin << ": " << e.description() << " (line " << e.source().begin.line << ")";
        throw ValidationError(msg.str());
    }
}

// Tables whose `type` selects the schema are replaced wholesale when the
// overlay names a type; everything else merges key by key.
void overlay(toml::table& base, const toml::table& top) {
    for (auto&& [k, v] : top) {
        toml::node* existing = base.get(k);
        const toml::table* top_table = v.as_table();
        if (existing && existing->is_table() && top_table && !top_table->contains("type")) {
            overlay(*existing->as_table(), *top_table);
            continue;
        }
        v.visit([&, key = k](auto&& node) { base.insert_or_assign(key, node); });
    }
}

const std::map<std::string, std::set<std::string>>& sweep_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"eta-phi-map", {"type", "phi", "eta_over_g", "nonstationary_threshold"}},
        {"weight-vs-phi", {"type", "phi"}},
        {"initial-state-map", {"type", "c_plus", "c_minus", "phi_state", "mapping", "nonstationary_threshold"}},
        {"dfs-map", {"type", "eta_over_g", "delta_over_g", "antisymmetric_detuning"}},
        {"gap-scaling", {"type", "n_list", "resolution"}},
    };
    return keys;
}

const std::map<std::string, std::vector<std::string>>& sweep_required() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"eta-phi-map", {"phi", "eta_over_g"}},
        {"weight-vs-phi", {"phi"}},
        {"initial-state-map", {"c_plus", "c_minus"}},
        {"dfs-map", {"eta_over_g", "delta_over_g"}},
        {"gap-scaling", {"n_list"}},
    };
    return keys;
}

ModelConfig read_model(Section s) {
    ModelConfig m;
    std::string kind = to_string(m.kind), coupling = to_string(m.coupling);
    s.read("kind", kind);
    m.kind = model_kind_from_string(kind);
    auto& p = m.params;
    s.read("g", p.g);
    s.read("phi", p.phi);
    s.read("eta", p.eta);
    s.read("kappa", p.kappa);
    s.read("delta_c", p.delta_c);
    s.read("delta_a", p.delta_a);
    s.read("delta_b", p.delta_b);
    s.read("n_a", p.n_a);
    s.read("n_b", p.n_b);
    s.read("n_atoms", p.n_atoms);
    s.read("n_max", p.n_max);
    s.read("include_lamb_shift", p.include_lamb_shift);
    s.read("full_space", m.full_space);
    s.read("three_level_coupling", coupling);
    m.coupling = coupling_from_string(coupling);
    s.finish();
    return m;
}

InitialStateConfig read_initial_state(Section s) {
    std::string type = "preset";
    s.read("type", type);
    if (type == "preset") {
        PresetState st;
        s.read("name", st.name);
        s.finish();
        return st;
    }
    if (type == "bloch") {
        BlochState st;
        s.read("s_a", st.s_a);
        s.read("s_b", st.s_b);
        s.read("alpha_re", st.alpha_re);
        s.read("alpha_im", st.alpha_im);
        s.finish();
        return st;
    }
    if (type == "amplitudes") {
        AmplitudeState st;
        std::string mapping = to_string(st.mapping);
        s.read("c_plus", st.c_plus);
        s.read("c_minus", st.c_minus);
        s.read("phi_state", st.phi_state);
        s.read("mapping", mapping);
        st.mapping = mapping_from_string(mapping);
        s.finish();
        return st;
    }
    throw ValidationError("initial_state.type must be preset, bloch or amplitudes, got '" + type + "'");
}

NumericsConfig read_numerics(Section s) {
    NumericsConfig n;
    std::string method = to_string(n.integrator.method);
    s.read("integrator", method);
    n.integrator.method = integrator_method_from_string(method);
    s.read("step", n.integrator.step);
    s.read("rtol", n.integrator.rtol);
    s.read("atol", n.integrator.atol);
    s.read("min_step", n.integrator.min_step);
    s.read("max_steps", n.integrator.max_steps);
    s.read("t_final", n.t_final);
    s.read("samples", n.samples);
    s.read("transient_fraction", n.transient_fraction);
    s.read("dc_threshold", n.dc_threshold);
    s.read("drift_abort", n.drift_abort);
    s.read("positivity_check", n.positivity_check);
    s.read("leakage_threshold", n.leakage_threshold);
    s.read("max_dimension", n.max_dimension);
    s.read("liouvillian_max_dimension", n.liouvillian_max_dimension);
    s.finish();
    return n;
}

SweepConfig read_sweep(Section s) {
    SweepConfig w;
    s.require("type");
    s.read("type", w.type);
    const auto it = sweep_keys().find(w.type);
    if (it == sweep_keys().end()) throw ValidationError("unknown sweep type '" + w.type + "'");
    s.forbid_except(it->second, "sweep type " + w.type);
    for (const auto& key : sweep_required().at(w.type)) s.require(key);
    std::string mapping = to_string(w.mapping);
    s.read("phi", w.phi);
    s.read("eta_over_g", w.eta_over_g);
    s.read("c_plus", w.c_plus);
    s.read("c_minus", w.c_minus);
    s.read("delta_over_g", w.delta_over_g);
    s.read("n_list", w.n_list);
    s.read("phi_state", w.phi_state);
    s.read("mapping", mapping);
    w.mapping = mapping_from_string(mapping);
    s.read("nonstationary_threshold", w.nonstationary_threshold);
    s.read("antisymmetric_detuning", w.antisymmetric_detuning);
    s.read("resolution", w.resolution);
    s.finish();
    return w;
}

RunConfig read_config(const toml::table& root) {
    Section s(root, "");
    RunConfig c;
    s.require("command");
    std::string command;
    s.read("command", command);
    c.command = command_from_string(command);
    s.read("preset", c.preset);
    if (s.has("model")) c.model = read_model(s.subsection("model"));
    if (s.has("initial_state")) c.initial_state = read_initial_state(s.subsection("initial_state"));
    if (s.has("numerics")) c.numerics = read_numerics(s.subsection("numerics"));
    if (s.has("sweep")) c.sweep = read_sweep(s.subsection("sweep"));
    if (s.has("output")) {
        Section o = s.subsection("output");
        o.read("dir", c.output.dir);
        o.finish();
    }
    s.finish();
    validate(c);
    return c;
}

// ---- serialization ------------------------------------------------------------

std::string quoted(const std::string& s) {
    std::ostringstream out;
    out << toml::value<std::string>(s);
    return out.str();
}

std::string toml_number(double v) {
    std::string s = format_number(v);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0"; // keep floats as TOML floats
    return s;
}

std::string grid_text(const Grid& g) {
    return "{ start = " + toml_number(g.start) + ", stop = " + toml_number(g.stop) + ", count = " +
           std::to_string(g.count) + " }";
}

} // namespace

std::string to_string(Command c) { return kCommands[int(c)]; }

Command command_from_string(const std::string& name) {
    for (int i = 0; i < 5; ++i)
        if (name == kCommands[i]) return Command(i);
    throw ValidationError("unknown command '" + name +
                          "' (expected evolve-mf, evolve-lindblad, spectrum, weights or sweep)");
}

RunConfig parse_config(std::string_view toml_text) { return read_config(parse_table(toml_text, "config")); }

RunConfig resolve_config(std::string_view config_text, const std::string& preset, std::optional<Command> command) {
    toml::table root;
    if (!preset.empty()) {
        root = parse_table(preset_text(preset), "preset " + preset);
        root.insert_or_assign("preset", preset);
    }
    if (!config_text.empty()) overlay(root, parse_table(config_text, "config"));
    if (command) {
        if (auto existing = root.get_as<std::string>("command"); existing && existing->get() != to_string(*command))
            throw ValidationError("command '" + to_string(*command) + "' conflicts with configured command '" +
                                  existing->get() + "'");
        root.insert_or_assign("command", to_string(*command));
    }
    if (!root.contains("command")) throw ValidationError("no command given on the command line or in the config");
    return read_config(root);
}

std::string serialize(const RunConfig& c) {
    std::ostringstream out;
    out << "command = " << quoted(to_string(c.command)) << "\n";
    if (!c.preset.empty()) out << "preset = " << quoted(c.preset) << "\n";

    const auto& p = c.model.params;
    out << "\n[model]\n"
        << "kind = " << quoted(to_string(c.model.kind)) << "\n"
        << "g = " << toml_number(p.g) << "\n"
        << "phi = " << toml_number(p.phi) << "\n"
        << "eta = " << toml_number(p.eta) << "\n"
        << "kappa = " << toml_number(p.kappa) << "\n"
        << "delta_c = " << toml_number(p.delta_c) << "\n"
        << "delta_a = " << toml_number(p.delta_a) << "\n"
        << "delta_b = " << toml_number(p.delta_b) << "\n"
        << "n_a = " << p.n_a << "\n"
        << "n_b = " << p.n_b << "\n"
        << "n_atoms = " << p.n_atoms << "\n"
        << "n_max = " << p.n_max << "\n"
        << "include_lamb_shift = " << (p.include_lamb_shift ? "true" : "false") << "\n"
        << "full_space = " << (c.model.full_space ? "true" : "false") << "\n"
        << "three_level_coupling = " << quoted(to_string(c.model.coupling)) << "\n";

    out << "\n[initial_state]\n";
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, PresetState>) {
                out << "type = 'preset'\nname = " << quoted(st.name) << "\n";
            } else if constexpr (std::is_same_v<T, BlochState>) {
                auto vec = [](const std::array<double, 3>& v) {
                    return "[" + toml_number(v[0]) + ", " + toml_number(v[1]) + ", " + toml_number(v[2]) + "]";
                };
                out << "type = 'bloch'\ns_a = " << vec(st.s_a) << "\ns_b = " << vec(st.s_b)
                    << "\nalpha_re = " << toml_number(st.alpha_re) << "\nalpha_im = " << toml_number(st.alpha_im)
                    << "\n";
            } else {
                out << "type = 'amplitudes'\nc_plus = " << toml_number(st.c_plus)
                    << "\nc_minus = " << toml_number(st.c_minus) << "\nphi_state = " << toml_number(st.phi_state)
                    << "\nmapping = " << quoted(to_string(st.mapping)) << "\n";
            }
        },
        c.initial_state);

    const auto& n = c.numerics;
    out << "\n[numerics]\n"
        << "integrator = " << quoted(to_string(n.integrator.method)) << "\n"
        << "step = " << toml_number(n.integrator.step) << "\n"
        << "rtol = " << toml_number(n.integrator.rtol) << "\n"
        << "atol = " << toml_number(n.integrator.atol) << "\n"
        << "min_step = " << toml_number(n.integrator.min_step) << "\n"
        << "max_steps = " << n.integrator.max_steps << "\n"
        << "t_final = " << toml_number(n.t_final) << "\n"
        << "samples = " << n.samples << "\n"
        << "transient_fraction = " << toml_number(n.transient_fraction) << "\n"
        << "dc_threshold = " << toml_number(n.dc_threshold) << "\n"
        << "drift_abort = " << toml_number(n.drift_abort) << "\n"
        << "positivity_check = " << (n.positivity_check ? "true" : "false") << "\n"
        << "leakage_threshold = " << toml_number(n.leakage_threshold) << "\n"
        << "max_dimension = " << n.max_dimension << "\n"
        << "liouvillian_max_dimension = " << n.liouvillian_max_dimension << "\n";

    if (c.sweep) {
        const SweepConfig& w = *c.sweep;
        const auto& allowed = sweep_keys().at(w.type);
        out << "\n[sweep]\ntype = " << quoted(w.type) << "\n";
        auto grid = [&](const char* key, const std::optional<Grid>& g) {
            if (g && allowed.count(key)) out << key << " = " << grid_text(*g) << "\n";
        };
        grid("phi", w.phi);
        grid("eta_over_g", w.eta_over_g);
        grid("c_plus", w.c_plus);
        grid("c_minus", w.c_minus);
        grid("delta_over_g", w.delta_over_g);
        if (allowed.count("n_list")) {
            out << "n_list = [";
            for (std::size_t i = 0; i < w.n_list.size(); ++i) out << (i ? ", " : "") << w.n_list[i];
            out << "]\n";
        }
        if (allowed.count("phi_state")) out << "phi_state = " << toml_number(w.phi_state) << "\n";
        if (allowed.count("mapping")) out << "mapping = " << quoted(to_string(w.mapping)) << "\n";
        if (allowed.count("nonstationary_threshold"))
            out << "nonstationary_threshold = " << toml_number(w.nonstationary_threshold) << "\n";
        if (allowed.count("antisymmetric_detuning"))
            out << "antisymmetric_detuning = " << (w.antisymmetric_detuning ? "true" : "false") << "\n";
        if (allowed.count("resolution")) out << "resolution = " << toml_number(w.resolution) << "\n";
    }

    if (!c.output.dir.empty()) out << "\n[output]\ndir = " << quoted(c.output.dir) << "\n";
    return out.str();
}

// ---- cross-field validation -----------------------------------------------------

namespace {

void check_positive(double v, const std::string& name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(name + " must be positive and finite");
}

void check_state(const RunConfig& c) {
    const bool two_species = is_two_species(c.model.kind);
    const bool exact = c.command == Command::EvolveLindblad || c.command == Command::Weights;
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, PresetState>) {
                static const std::set<std::string> two = {"plus-x-product", "all-down"};
                static const std::set<std::string> three = {"dark", "bright", "ground"};
                if (!(two_species ? two : three).count(st.name))
                    throw ValidationError("initial state preset '" + st.name + "' does not fit a " +
                                          to_string(c.model.kind) + " model");
            } else if constexpr (std::is_same_v<T, BlochState>) {
                if (!two_species) throw ValidationError("bloch initial states need a two-species model");
                for (const auto* s : {&st.s_a, &st.s_b}) {
                    const double len = std::sqrt((*s)[0] * (*s)[0] + (*s)[1] * (*s)[1] + (*s)[2] * (*s)[2]);
                    if (!std::isfinite(len) || len > 1.0 + 1e-12)
                        throw ValidationError("bloch vectors must have length <= 1");
                    if (exact && std::abs(len - 1.0) > 1e-12)
                        throw ValidationError("exact runs need unit bloch vectors (pure product states)");
                }
                if (!std::isfinite(st.alpha_re) || !std::isfinite(st.alpha_im))
                    throw ValidationError("initial alpha must be finite");
                if (exact && c.model.kind == ModelKind::SpinOnly && (st.alpha_re != 0.0 || st.alpha_im != 0.0))
                    throw ValidationError("the spin-only model has no cavity amplitude");
            } else {
                if (two_species) throw ValidationError("amplitude initial states need a three-level model");
                if (!std::isfinite(st.c_plus) || !std::isfinite(st.c_minus) || !std::isfinite(st.phi_state) ||
                    st.c_plus * st.c_plus + st.c_minus * st.c_minus > 1.0 + 1e-12)
                    throw ValidationError("amplitudes must satisfy c_plus^2 + c_minus^2 <= 1");
            }
        },
        c.initial_state);
}

void check_grid(const std::optional<Grid>& g, const std::string& name) {
    if (!g) return;
    if (g->count == 0) throw ValidationError("sweep." + name + ".count must be at least 1");
    if (!std::isfinite(g->start) || !std::isfinite(g->stop))
        throw ValidationError("sweep." + name + " bounds must be finite");
}

} // namespace

void validate(const RunConfig& c) {
    c.model.params.validate();
    const auto& n = c.numerics;
    check_positive(n.t_final, "numerics.t_final");
    if (n.samples < 2) throw ValidationError("numerics.samples must be at least 2");
    check_positive(n.integrator.step, "numerics.step");
    check_positive(n.integrator.rtol, "numerics.rtol");
    check_positive(n.integrator.atol, "numerics.atol");
    check_positive(n.integrator.min_step, "numerics.min_step");
    check_positive(n.drift_abort, "numerics.drift_abort");
    check_positive(n.dc_threshold, "numerics.dc_threshold");
    check_positive(n.leakage_threshold, "numerics.leakage_threshold");
    if (n.integrator.max_steps == 0) throw ValidationError("numerics.max_steps must be positive");
    if (!(n.transient_fraction >= 0.0 && n.transient_fraction < 1.0))
        throw ValidationError("numerics.transient_fraction must lie in [0, 1)");
    if (n.max_dimension == 0 || n.liouvillian_max_dimension == 0)
        throw ValidationError("dimension budgets must be positive");
    if (!c.preset.empty()) {
        const auto& names = preset_names();
        if (std::find(names.begin(), names.end(), c.preset) == names.end())
            throw ValidationError("unknown preset '" + c.preset + "'");
    }

    if (c.command != Command::Sweep && c.command != Command::Spectrum) check_state(c);

    if (c.command != Command::Sweep) return;
    if (!c.sweep) throw ValidationError("the sweep command needs a [sweep] table");
    const SweepConfig& w = *c.sweep;
    check_grid(w.phi, "phi");
    check_grid(w.eta_over_g, "eta_over_g");
    check_grid(w.c_plus, "c_plus");
    check_grid(w.c_minus, "c_minus");
    check_grid(w.delta_over_g, "delta_over_g");
    const bool two_species = is_two_species(c.model.kind);
    if (w.type == "eta-phi-map") {
        check_state(c);
        if (w.eta_over_g->start < 0.0 || w.eta_over_g->stop < 0.0)
            throw ValidationError("sweep.eta_over_g must be non-negative");
    } else if (w.type == "weight-vs-phi") {
        if (!two_species) throw ValidationError("weight-vs-phi needs a two-species model");
        if (c.model.params.n_a != c.model.params.n_b) throw ValidationError("weight-vs-phi needs n_a == n_b");
    } else if (w.type == "initial-state-map") {
        if (two_species) throw ValidationError("initial-state-map needs a three-level model");
    } else if (w.type == "dfs-map") {
        if (w.eta_over_g->start < 0.0 || w.eta_over_g->stop < 0.0)
            throw ValidationError("sweep.eta_over_g must be non-negative");
    } else if (w.type == "gap-scaling") {
        if (c.model.kind != ModelKind::ThreeLevelEffective)
            throw ValidationError("gap-scaling runs on the three-level-effective model");
        if (w.n_list.empty()) throw ValidationError("sweep.n_list must not be empty");
        for (int k : w.n_list)
            if (k < 1) throw ValidationError("sweep.n_list entries must be >= 1");
        check_positive(w.resolution, "sweep.resolution");
        if (c.model.params.delta_a == 0.0) throw ValidationError("gap-scaling needs a nonzero model.delta_a");
    }
}

} // namespace phasesym::cli
