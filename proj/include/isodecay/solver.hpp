/// @file solver.hpp
/// @brief Explicit time integration of the isentropic compressible
/// Navier-Stokes system on the MAC grid with no-slip walls.
///
/// One step is forward Euler:
///   - continuity in flux form with first-order upwind face densities, so
///     the total mass changes only through boundary fluxes (all zero);
///   - momentum rho*u on faces (face density = mean of the adjacent cells)
///     with upwind convective fluxes built from the same mass fluxes,
///     centered pressure gradient and the viscous operator
///     mu*lap(u) + (lambda + mu)*grad(div u);
///   - velocity recovered as momentum / new face density.
#pragma once

#include <functional>

#include "isodecay/fluid.hpp"

namespace isodecay {

struct SolverConfig {
    double cfl = 0.4;          // acoustic CFL fraction, (0, 1]
    double visc_safety = 0.5;  // fraction of the explicit viscous limit, (0, 1]
    double rho_floor = 0.0;    // faces at or below this density carry no velocity
    double t_end = 2.0;
    double output_dt = 0.01;

    /// Throws DomainError when a field is out of range.
    void validate() const;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct StepReport {
    double dt_used = 0.0;
    double max_wave_speed = 0.0;  // max|u| + max sound speed before the step
    double max_rho = 0.0;         // after the step
    double min_rho = 0.0;
    bool rho_bound_ok = true;     // max_rho <= rho_bar
};

/// max|u| + max sqrt(gamma rho^(gamma-1)).
double max_wave_speed(const State& state, const FluidParams& params);

/// min(cfl h / (max|u| + max c), visc_safety rho_min h^2 / (4 (lambda + 2 mu)))
/// with h = min(dx, dy) and rho_min the smallest density above rho_floor.
/// Throws DegenerateDataError for an all-vacuum state.
double stable_dt(const State& state, const FluidParams& params, const SolverConfig& config);

struct StepResult {
    State state;
    StepReport report;
};

/// Advances by exactly dt. Throws SchemeFailure when a density turns
/// negative and NaNDetected on non-finite values.
StepResult step(const State& state, const FluidParams& params, const SolverConfig& config,
                double dt);
/// Advances by stable_dt().
StepResult step(const State& state, const FluidParams& params, const SolverConfig& config);

struct RunStatus {
    int steps = 0;
    bool rho_bound_ok = true;  // sticky: false once max rho exceeded rho_bar
    double max_rho = 0.0;      // over the whole run so far
    double min_rho = 0.0;
    StepReport last;
};

/// Receives the state at t = 0, at every multiple of output_dt and at t_end.
using StateSink = std::function<void(const State&, const RunStatus&)>;

/// Steps until t_end, shortening steps so that output times are hit
/// exactly. Errors from step() or from the sink abort the run.
State run(const State& initial, const FluidParams& params, const SolverConfig& config,
          const StateSink& sink);

}  // namespace isodecay
