#include "phasesym/trajectory.hpp"

#include "phasesym/error.hpp"

namespace phasesym {

const Series& Trajectory::series(const std::string& name) const {
    for (const auto& s : observables)
        if (s.name == name) return s;
    throw ValidationError("trajectory has no series named '" + name + "'");
}

std::vector<double> Trajectory::real_series(const std::string& name) const {
    const Series& s = series(name);
    std::vector<double> out;
    out.reserve(s.values.size());
    for (const Complex& v : s.values) out.push_back(v.real());
    return out;
}

double Trajectory::dt() const {
    if (times.size() < 2) throw ValidationError("trajectory has fewer than two samples");
    return times[1] - times[0];
}

std::vector<double> uniform_times(double t_final, std::size_t count) {
    if (count < 2) throw ValidationError("sample_count must be at least 2");
    if (!(t_final > 0.0)) throw ValidationError("t_final must be positive");
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k) t[k] = t_final * double(k) / double(count - 1);
    t.back() = t_final;
    return t;
}

} // namespace phasesym
