#include "isodecay/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "isodecay/errors.hpp"

namespace isodecay {

void SolverConfig::validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw DomainError("cfl must lie in (0, 1]");
    if (!(visc_safety > 0.0 && visc_safety <= 1.0)) {
        throw DomainError("visc_safety must lie in (0, 1]");
    }
    if (!(rho_floor >= 0.0)) throw DomainError("rho_floor must be nonnegative");
    if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
    if (!(output_dt > 0.0)) throw DomainError("output_dt must be positive");
}

double max_wave_speed(const State& state, const FluidParams& params) {
    const double u_max = state.u.max_abs();
    const double rho_max = std::max(state.rho.max(), 0.0);
    return u_max + std::sqrt(params.gamma * std::pow(rho_max, params.gamma - 1.0));
}

double stable_dt(const State& state, const FluidParams& params, const SolverConfig& config) {
    const GridSpec& g = state.rho.grid();
    double rho_min = std::numeric_limits<double>::infinity();
    for (double r : state.rho.values().data()) {
        if (r > config.rho_floor) rho_min = std::min(rho_min, r);
    }
    if (!std::isfinite(rho_min)) throw DegenerateDataError("all cells are vacuum; no stable step");
    const double h = g.h_min();
    const double acoustic = config.cfl * h / max_wave_speed(state, params);
    const double viscous =
        config.visc_safety * rho_min * h * h / (4.0 * (params.lambda + 2.0 * params.mu));
    return std::min(acoustic, viscous);
}

namespace {

struct MassFlux {
    Array2D fx;  // (nx+1) x ny
    Array2D fy;  // nx x (ny+1)
};

MassFlux upwind_mass_flux(const ScalarField& rho, const VectorField& u) {
    const GridSpec& g = rho.grid();
    MassFlux f{Array2D(g.nx + 1, g.ny), Array2D(g.nx, g.ny + 1)};
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double v = u.ux(i, j);
            f.fx(i, j) = v * (v >= 0.0 ? rho(i - 1, j) : rho(i, j));
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double v = u.uy(i, j);
            f.fy(i, j) = v * (v >= 0.0 ? rho(i, j - 1) : rho(i, j));
        }
    }
    return f;
}

double upwind(double flux, double behind, double ahead) {
    return flux * (flux >= 0.0 ? behind : ahead);
}

// Divergence of the upwind momentum fluxes on interior faces, built from the
// cell mass fluxes so that a uniform velocity is transported consistently
// with the continuity update.
VectorField convection(const MassFlux& f, const VectorField& u) {
    const GridSpec& g = u.grid();
    const double dx = g.dx();
    const double dy = g.dy();
    VectorField c(g);

    // x momentum: control volume of face (i, j) spans cells i-1 and i.
    Array2D gx(g.nx, g.ny);          // flux through cell centers
    Array2D hx(g.nx + 1, g.ny + 1);  // flux through nodes
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double fc = 0.5 * (f.fx(i, j) + f.fx(i + 1, j));
            gx(i, j) = upwind(fc, u.ux(i, j), u.ux(i + 1, j));
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double fn = 0.5 * (f.fy(i - 1, j) + f.fy(i, j));
            hx(i, j) = upwind(fn, u.ux(i, j - 1), u.ux(i, j));
        }
    }
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            c.ux(i, j) = (gx(i, j) - gx(i - 1, j)) / dx + (hx(i, j + 1) - hx(i, j)) / dy;
        }
    }

    // y momentum: control volume of face (i, j) spans cells j-1 and j.
    Array2D gy(g.nx, g.ny);
    Array2D hy(g.nx + 1, g.ny + 1);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double fc = 0.5 * (f.fy(i, j) + f.fy(i, j + 1));
            gy(i, j) = upwind(fc, u.uy(i, j), u.uy(i, j + 1));
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            const double fn = 0.5 * (f.fx(i, j - 1) + f.fx(i, j));
            hy(i, j) = upwind(fn, u.uy(i - 1, j), u.uy(i, j));
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            c.uy(i, j) = (gy(i, j) - gy(i, j - 1)) / dy + (hy(i + 1, j) - hy(i, j)) / dx;
        }
    }
    return c;
}

void check_finite(const State& s) {
    for (double v : s.rho.values().data()) {
        if (!std::isfinite(v)) throw NaNDetected("non-finite density after step at t = " + std::to_string(s.t));
    }
    for (const Array2D* a : {&s.u.ux_array(), &s.u.uy_array()}) {
        for (double v : a->data()) {
            if (!std::isfinite(v)) {
                throw NaNDetected("non-finite velocity after step at t = " + std::to_string(s.t));
            }
        }
    }
}

}  // namespace

StepResult step(const State& state, const FluidParams& params, const SolverConfig& config,
                double dt) {
    const GridSpec& g = state.rho.grid();
    require_same_grid(g, state.u.grid(), "step");
    if (!(dt > 0.0)) throw DomainError("time step must be positive");
    const double dx = g.dx();
    const double dy = g.dy();

    StepReport report;
    report.dt_used = dt;
    report.max_wave_speed = max_wave_speed(state, params);

    const MassFlux flux = upwind_mass_flux(state.rho, state.u);
    State next{state.t + dt, ScalarField(g), VectorField(g)};
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double div = (flux.fx(i + 1, j) - flux.fx(i, j)) / dx +
                               (flux.fy(i, j + 1) - flux.fy(i, j)) / dy;
            next.rho(i, j) = state.rho(i, j) - dt * div;
        }
    }

    const VectorField conv = convection(flux, state.u);
    const VectorField grad_p = gradient(pressure(state.rho, params));
    const VectorField lap = laplacian(state.u);
    const VectorField grad_div = gradient(divergence(state.u));
    const VectorField rho_face = face_density(state.rho);
    const VectorField rho_face_next = face_density(next.rho);
    const double mu = params.mu;
    const double bulk = params.lambda + params.mu;

    auto advance = [&](const Array2D& r0, const Array2D& r1, const Array2D& u, const Array2D& c,
                       const Array2D& gp, const Array2D& l, const Array2D& gd, Array2D& out,
                       int i0, int i1, int j0, int j1) {
        for (int j = j0; j < j1; ++j) {
            for (int i = i0; i < i1; ++i) {
                const double m = r0(i, j) * u(i, j) +
                                 dt * (-c(i, j) - gp(i, j) + mu * l(i, j) + bulk * gd(i, j));
                out(i, j) = r1(i, j) > config.rho_floor ? m / r1(i, j) : 0.0;
            }
        }
    };
    advance(rho_face.ux_array(), rho_face_next.ux_array(), state.u.ux_array(), conv.ux_array(),
            grad_p.ux_array(), lap.ux_array(), grad_div.ux_array(), next.u.ux_array(), 1, g.nx,
            0, g.ny);
    advance(rho_face.uy_array(), rho_face_next.uy_array(), state.u.uy_array(), conv.uy_array(),
            grad_p.uy_array(), lap.uy_array(), grad_div.uy_array(), next.u.uy_array(), 0, g.nx,
            1, g.ny);

    check_finite(next);
    report.min_rho = next.rho.min();
    report.max_rho = next.rho.max();
    if (report.min_rho < 0.0) {
        std::ostringstream os;
        os << "negative density " << report.min_rho << " at t = " << next.t << " (dt = " << dt
           << "); the step is too large or the flow is unresolved";
        throw SchemeFailure(os.str());
    }
    report.rho_bound_ok = report.max_rho <= params.rho_bar;
    return {std::move(next), report};
}

StepResult step(const State& state, const FluidParams& params, const SolverConfig& config) {
    return step(state, params, config, stable_dt(state, params, config));
}

State run(const State& initial, const FluidParams& params, const SolverConfig& config,
          const StateSink& sink) {
    params.validate();
    config.validate();
    if (initial.rho.min() < 0.0) throw DomainError("initial density has negative cells");
    if (!initial.u.boundary_is_zero()) throw DomainError("initial velocity violates no-slip");

    RunStatus status;
    status.max_rho = initial.rho.max();
    status.min_rho = initial.rho.min();
    status.rho_bound_ok = status.max_rho <= params.rho_bar;
    if (sink) sink(initial, status);

    State s = initial;
    long next_output = 1;
    // Output times closer than this to t_end collapse onto t_end.
    const double merge = 1e-9 * config.output_dt;
    while (s.t < config.t_end) {
        double target = next_output * config.output_dt;
        if (target > config.t_end - merge) target = config.t_end;
        const double dt_stable = stable_dt(s, params, config);
        const bool lands = dt_stable >= target - s.t;
        StepResult r = step(s, params, config, lands ? target - s.t : dt_stable);
        s = std::move(r.state);
        if (lands) s.t = target;

        ++status.steps;
        status.last = r.report;
        status.max_rho = std::max(status.max_rho, r.report.max_rho);
        status.min_rho = std::min(status.min_rho, r.report.min_rho);
        if (!r.report.rho_bound_ok) status.rho_bound_ok = false;

        if (lands) {
            if (sink) sink(s, status);
            if (target < config.t_end) ++next_output;
        }
    }
    return s;
}

}  // namespace isodecay
