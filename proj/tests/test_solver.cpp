#include <cmath>
#include <limits>

#include "doctest.h"
#include "isodecay/errors.hpp"
#include "isodecay/presets.hpp"
#include "isodecay/solver.hpp"

using namespace isodecay;

namespace {

State preset(const char* name, int n, double amplitude, std::uint64_t seed = 1) {
    return build_initial(InitialPreset{name, amplitude, seed}, GridSpec::make(n, n, 1.0, 1.0), 1.0);
}

}  // namespace

TEST_CASE("stable_dt") {
    const GridSpec g = GridSpec::make(16, 16, 1.0, 1.0);
    FluidParams p;
    p.gamma = 2.0;
    p.mu = 1e-8;  // viscous limit far away
    SolverConfig c;
    const State rest{0.0, ScalarField(g, 1.0), VectorField(g)};
    // sound speed sqrt(gamma) at rho = 1
    CHECK(stable_dt(rest, p, c) == doctest::Approx(c.cfl * g.dx() / std::sqrt(2.0)).epsilon(1e-15));

    // Acoustic part: doubling the resolution at most halves dt.
    const GridSpec g2 = GridSpec::make(32, 32, 1.0, 1.0);
    const State rest2{0.0, ScalarField(g2, 1.0), VectorField(g2)};
    CHECK(stable_dt(rest2, p, c) >= 0.5 * stable_dt(rest, p, c) * (1 - 1e-15));

    // Viscous part scales like h^2.
    p.mu = 10.0;
    const double d1 = stable_dt(rest, p, c);
    const double d2 = stable_dt(rest2, p, c);
    CHECK(d1 == doctest::Approx(c.visc_safety * g.dx() * g.dx() / (4.0 * 2.0 * p.mu)).epsilon(1e-14));
    CHECK(d2 == doctest::Approx(0.25 * d1).epsilon(1e-14));
    p.lambda = -5.0;  // lambda + 2 mu shrinks, the bound grows
    CHECK(stable_dt(rest, p, c) > d1);

    const State vacuum{0.0, ScalarField(g, 0.0), VectorField(g)};
    CHECK_THROWS_AS(stable_dt(vacuum, p, c), DegenerateDataError);
}

TEST_CASE("SolverConfig validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.cfl = 1.5;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = SolverConfig{};
    c.visc_safety = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = SolverConfig{};
    c.output_dt = -1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("equilibrium is an exact fixed point") {
    const State s = preset("equilibrium", 24, 0.0);
    const FluidParams p;
    const SolverConfig c;
    const StepResult r = step(s, p, c);
    CHECK(r.state.rho == s.rho);
    CHECK(r.state.u == s.u);
    CHECK(r.state.t == r.report.dt_used);
    CHECK(r.report.rho_bound_ok);
}

TEST_CASE("mass is conserved to round-off every step") {
    const FluidParams p;
    const SolverConfig c;
    for (const char* name : {"random", "vortex", "gaussian-bump"}) {
        State s = preset(name, 32, 0.3, 7);
        const double m0 = integrate(s.rho);
        for (int k = 0; k < 100; ++k) {
            const double before = integrate(s.rho);
            s = step(s, p, c).state;
            CHECK(std::abs(integrate(s.rho) - before) <= 1e-14 * before);
        }
        CHECK(std::abs(integrate(s.rho) - m0) <= 1e-13 * m0);
        CHECK(s.u.boundary_is_zero());
    }
}

TEST_CASE("total energy does not grow on resolved small perturbations") {
    const FluidParams p;
    const SolverConfig c;
    // Per step. The first step from rest gains O(dt^2 |grad P|^2) of kinetic
    // energy before any dissipation acts, so this needs a fine grid.
    for (const char* name : {"gaussian-bump", "random", "vortex"}) {
        State s = preset(name, 64, 0.02);
        const double e0 = total_energy(s, p);
        double e = e0;
        for (int k = 0; k < 200; ++k) {
            s = step(s, p, c).state;
            const double next = total_energy(s, p);
            CHECK(next <= e + 1e-10 * e0);
            e = next;
        }
    }
    // Between output times.
    SolverConfig coarse = c;
    coarse.t_end = 0.3;
    const State s0 = preset("gaussian-bump", 32, 0.1);
    const double e0 = total_energy(s0, p);
    double prev = e0;
    run(s0, p, coarse, [&](const State& s, const RunStatus&) {
        const double e = total_energy(s, p);
        CHECK(e <= prev + 1e-10 * e0);
        prev = e;
    });
}

TEST_CASE("step failures") {
    const FluidParams p;
    const SolverConfig c;
    State strong = preset("equilibrium", 16, 0.0);
    for (int j = 0; j < 16; ++j) {
        for (int i = 1; i < 16; ++i) strong.u.ux(i, j) = 1.0;  // drains the first column
    }
    CHECK_THROWS_AS(step(strong, p, c, 1.0), SchemeFailure);

    State bad = preset("equilibrium", 16, 0.0);
    bad.u.ux(5, 5) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(step(bad, p, c, 1e-4), NaNDetected);
    CHECK_THROWS_AS(step(preset("equilibrium", 16, 0.0), p, c, 0.0), DomainError);
}

TEST_CASE("run hits output times exactly") {
    const FluidParams p;
    SolverConfig c;
    c.t_end = 0.05;
    c.output_dt = 0.01;
    std::vector<double> times;
    const State final_state = run(preset("gaussian-bump", 16, 0.1), p, c,
                                  [&](const State& s, const RunStatus&) { times.push_back(s.t); });
    REQUIRE(times.size() == 6);
    for (int k = 0; k <= 5; ++k) CHECK(times[k] == (k == 5 ? c.t_end : k * c.output_dt));
    CHECK(final_state.t == c.t_end);
}

TEST_CASE("run shorter than one stable step") {
    const FluidParams p;
    SolverConfig c;
    c.t_end = 1e-7;
    int records = 0;
    int steps = 0;
    run(preset("gaussian-bump", 16, 0.1), p, c, [&](const State&, const RunStatus& st) {
        ++records;
        steps = st.steps;
    });
    CHECK(records == 2);
    CHECK(steps == 1);
}

TEST_CASE("equilibrium run keeps energy constant") {
    const FluidParams p;
    SolverConfig c;
    c.t_end = 0.02;
    const State s0 = preset("equilibrium", 16, 0.0);
    const double e0 = total_energy(s0, p);
    run(s0, p, c, [&](const State& s, const RunStatus& st) {
        CHECK(total_energy(s, p) == e0);
        CHECK(st.rho_bound_ok);
    });
}

TEST_CASE("density bound violations are sticky") {
    FluidParams p;
    p.rho_bar = 1.0 + 1e-6;  // the vortex compresses slightly above 1
    SolverConfig c;
    c.t_end = 0.1;
    bool seen_violation = false;
    int records = 0;
    run(preset("vortex", 16, 0.5), p, c, [&](const State&, const RunStatus& st) {
        ++records;
        if (seen_violation) CHECK_FALSE(st.rho_bound_ok);
        if (!st.rho_bound_ok) seen_violation = true;
    });
    CHECK(seen_violation);
    CHECK(records == 11);
}

TEST_CASE("run errors") {
    const FluidParams p;
    SolverConfig c;
    c.t_end = 0.01;
    const State s0 = preset("gaussian-bump", 16, 0.1);
    CHECK_THROWS_AS(run(s0, p, c, [](const State& s, const RunStatus&) {
                        if (s.t > 0.0) throw std::runtime_error("sink full");
                    }),
                    std::runtime_error);
    SolverConfig bad = c;
    bad.cfl = 0.0;
    CHECK_THROWS_AS(run(s0, p, bad, nullptr), DomainError);
}

TEST_CASE("runs are deterministic") {
    const FluidParams p;
    SolverConfig c;
    c.t_end = 0.02;
    const State s0 = preset("random", 16, 0.2, 99);
    const State a = run(s0, p, c, nullptr);
    const State b = run(s0, p, c, nullptr);
    CHECK(a.rho == b.rho);
    CHECK(a.u == b.u);
}
