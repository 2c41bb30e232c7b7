#include "phasesym/integrator.hpp"

namespace phasesym {

std::string to_string(IntegratorMethod m) { return m == IntegratorMethod::Rk4Fixed ? "rk4" : "rk45"; }

IntegratorMethod integrator_method_from_string(const std::string& name) {
    if (name == "rk4") return IntegratorMethod::Rk4Fixed;
    if (name == "rk45") return IntegratorMethod::Rk45Adaptive;
    throw ValidationError("unknown integrator '" + name + "' (expected rk4 or rk45)");
}

} // namespace phasesym
