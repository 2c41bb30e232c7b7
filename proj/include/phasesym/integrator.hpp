#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "phasesym/error.hpp"
#include "phasesym/trajectory.hpp"

namespace phasesym {

enum class IntegratorMethod { Rk4Fixed, Rk45Adaptive };

struct IntegratorOptions {
    IntegratorMethod method = IntegratorMethod::Rk45Adaptive;
    double step = 0.01;   // fixed step for RK4, initial step for RK45
    double rtol = 1e-8;
    double atol = 1e-10;
    double min_step = 1e-12;
    std::size_t max_steps = 200'000'000;

    bool operator==(const IntegratorOptions&) const = default;
};

std::string to_string(IntegratorMethod m);
IntegratorMethod integrator_method_from_string(const std::string& name);

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace detail {

template <class State>
double scaled_error(const State& err, const State& y0, const State& y1, double atol, double rtol) {
    const auto scale = (y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array() * rtol + atol);
    return (err.cwiseAbs().array() / scale).maxCoeff();
}

} // namespace detail

// Integrates dy/dt = rhs(t, y, dy) over the uniform grid of `sample_count` points
// in [0, t_final]. Steps land exactly on every grid time. `project(y)` runs after
// each accepted step; `sample(k, t, y)` runs at every grid point including t = 0.
template <class State, class Rhs, class Project, class Sample>
IntegrationStats integrate(Rhs&& rhs, State& y, double t_final, std::size_t sample_count,
                           const IntegratorOptions& opts, Project&& project, Sample&& sample) {
    const std::vector<double> grid = uniform_times(t_final, sample_count);
    if (!(opts.step > 0.0)) throw ValidationError("integrator step must be positive");
    IntegrationStats stats;
    sample(std::size_t{0}, 0.0, static_cast<const State&>(y));

    State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, tmp = y, y_new = y, err = y;
    double t = 0.0;
    double h = opts.step;

    for (std::size_t idx = 1; idx < grid.size(); ++idx) {
        const double target = grid[idx];
        while (t < target) {
            if (stats.accepted + stats.rejected >= opts.max_steps)
                throw NumericalError("integrator exceeded the maximum number of steps at t = " + std::to_string(t));
            double step = std::min(h, target - t);
            // avoid a sliver step right before the target
            const bool lands = step >= target - t - 1e-12 * std::max(1.0, target);
            if (lands) step = target - t;

            if (opts.method == IntegratorMethod::Rk4Fixed) {
                rhs(t, y, k1);
                tmp = y + (step / 2) * k1;
                rhs(t + step / 2, tmp, k2);
                tmp = y + (step / 2) * k2;
                rhs(t + step / 2, tmp, k3);
                tmp = y + step * k3;
                rhs(t + step, tmp, k4);
                y = y + (step / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                t = lands ? target : t + step;
                project(y);
                ++stats.accepted;
                continue;
            }

            // Dormand-Prince 5(4)
            rhs(t, y, k1);
            tmp = y + step * (1.0 / 5) * k1;
            rhs(t + step / 5, tmp, k2);
            tmp = y + step * ((3.0 / 40) * k1 + (9.0 / 40) * k2);
            rhs(t + step * 3 / 10, tmp, k3);
            tmp = y + step * ((44.0 / 45) * k1 - (56.0 / 15) * k2 + (32.0 / 9) * k3);
            rhs(t + step * 4 / 5, tmp, k4);
            tmp = y + step * ((19372.0 / 6561) * k1 - (25360.0 / 2187) * k2 + (64448.0 / 6561) * k3 -
                              (212.0 / 729) * k4);
            rhs(t + step * 8 / 9, tmp, k5);
            tmp = y + step * ((9017.0 / 3168) * k1 - (355.0 / 33) * k2 + (46732.0 / 5247) * k3 +
                              (49.0 / 176) * k4 - (5103.0 / 18656) * k5);
            rhs(t + step, tmp, k6);
            y_new = y + step * ((35.0 / 384) * k1 + (500.0 / 1113) * k3 + (125.0 / 192) * k4 -
                                (2187.0 / 6784) * k5 + (11.0 / 84) * k6);
            rhs(t + step, y_new, k7);
            err = step * ((71.0 / 57600) * k1 - (71.0 / 16695) * k3 + (71.0 / 1920) * k4 -
                          (17253.0 / 339200) * k5 + (22.0 / 525) * k6 - (1.0 / 40) * k7);
            const double e = detail::scaled_error(err, y, y_new, opts.atol, opts.rtol);
            if (!std::isfinite(e)) throw NumericalError("integrator produced non-finite values at t = " + std::to_string(t));
            const double factor = e == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
            if (e <= 1.0) {
                y = y_new;
                t = lands ? target : t + step;
                project(y);
                ++stats.accepted;
                // a step clipped to land on the grid keeps the untested proposal
                if (!(lands && step < h)) h = step * factor;
            } else {
                ++stats.rejected;
                h = step * factor;
                if (h < opts.min_step)
                    throw NumericalError("step size fell below the floor " + std::to_string(opts.min_step) +
                                         " at t = " + std::to_string(t));
            }
        }
        sample(idx, target, static_cast<const State&>(y));
    }
    return stats;
}

} // namespace phasesym
