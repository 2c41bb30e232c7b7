#include <map>

#include "phasesym/cli.hpp"
#include "phasesym/error.hpp"

namespace phasesym::cli {

namespace {

// g = 0.1 kappa throughout. Mean-field windows are desk scale (g t = 2e3).
const std::map<std::string, std::string>& presets() {
    static const std::map<std::string, std::string> table = {
        {"fig2a", R"(command = "sweep"

[model]
kind = "two-species-cavity"
g = 0.1

[initial_state]
type = "bloch"
s_a = [1.0, 0.0, 0.0]
s_b = [1.0, 0.0, 0.0]

[numerics]
t_final = 20000.0
samples = 8192

[sweep]
type = "eta-phi-map"
phi = { start = -3.141592653589793, stop = 3.141592653589793, count = 41 }
eta_over_g = { start = 0.0, stop = 2.0, count = 41 }
)"},
        {"fig2a-coarse", R"(command = "sweep"

[model]
kind = "two-species-cavity"
g = 0.1

[initial_state]
type = "bloch"
s_a = [1.0, 0.0, 0.0]
s_b = [1.0, 0.0, 0.0]

[numerics]
t_final = 4000.0
samples = 2048

[sweep]
type = "eta-phi-map"
phi = { start = -3.141592653589793, stop = 3.141592653589793, count = 21 }
eta_over_g = { start = 0.0, stop = 2.0, count = 21 }
)"},
        {"fig2b", R"(command = "sweep"

[model]
kind = "spin-only"
g = 0.1
n_a = 10
n_b = 10

[sweep]
type = "weight-vs-phi"
phi = { start = -3.141592653589793, stop = 3.141592653589793, count = 101 }
)"},
        {"fig2cd", R"(command = "evolve-lindblad"

[model]
kind = "spin-only"
g = 0.1
eta = 0.12
n_a = 5
n_b = 5

[initial_state]
type = "preset"
name = "plus-x-product"

[numerics]
t_final = 2000.0
samples = 2001
)"},
        {"fig3a", R"(command = "sweep"

[model]
kind = "three-level-effective"
g = 0.1

[initial_state]
type = "amplitudes"
c_plus = 0.8535533905932736
c_minus = -0.14644660940672627
phi_state = 0.0

[numerics]
t_final = 20000.0
samples = 8192

[sweep]
type = "eta-phi-map"
phi = { start = -3.141592653589793, stop = 3.141592653589793, count = 41 }
eta_over_g = { start = 0.0, stop = 1.0, count = 21 }
)"},
        {"fig3ce", R"(command = "sweep"

[model]
kind = "three-level-effective"
g = 0.1
eta = 0.05
phi = 2.0943951023931953

[numerics]
t_final = 20000.0
samples = 8192

[sweep]
type = "initial-state-map"
c_plus = { start = -1.0, stop = 1.0, count = 41 }
c_minus = { start = -1.0, stop = 1.0, count = 41 }
phi_state = 0.0
)"},
        {"figS3c", R"(command = "sweep"

[model]
kind = "three-level-effective"
g = 0.1
eta = 0.025
delta_a = 0.6283185307179586
delta_b = -0.6283185307179586

[numerics]
liouvillian_max_dimension = 81

[sweep]
type = "gap-scaling"
n_list = [1, 2, 3, 4]
resolution = 0.001
)"},
        {"figS4", R"(command = "spectrum"

[model]
kind = "spin-only"
g = 0.1
eta = 0.025
delta_a = 0.01
delta_b = 0.01
n_a = 3
n_b = 3
full_space = true
)"},
        {"dark", R"([model]
kind = "three-level-effective"
g = 0.1
eta = 0.0
n_atoms = 2

[initial_state]
type = "preset"
name = "dark"

[numerics]
t_final = 50.0
samples = 501
)"},
    };
    return table;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, text] : presets()) out.push_back(name);
        return out;
    }();
    return names;
}

std::string preset_text(const std::string& name) {
    const auto it = presets().find(name);
    if (it == presets().end()) {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ValidationError("unknown preset '" + name + "' (known: " + known + ")");
    }
    return it->second;
}

} // namespace phasesym::cli
