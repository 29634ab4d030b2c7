#include <cmath>

#include "doctest.h"
#include "isodecay/errors.hpp"
#include "isodecay/presets.hpp"

using namespace isodecay;

TEST_CASE("amplitude 0 gives the exact equilibrium for every preset") {
    const GridSpec g = GridSpec::make(12, 10, 1.0, 1.0);
    for (const std::string& name : preset_names()) {
        const State s = build_initial(InitialPreset{name, 0.0, 3}, g, 1.3);
        for (double r : s.rho.values().data()) CHECK(r == 1.3);
        CHECK(s.u == VectorField(g));
        CHECK(s.t == 0.0);
    }
}

TEST_CASE("density presets keep the target mean") {
    const GridSpec g = GridSpec::make(64, 48, 2.0, 1.5);
    for (const char* name : {"gaussian-bump", "random"}) {
        for (std::uint64_t seed : {1ull, 2ull, 77ull}) {
            const State s = build_initial(InitialPreset{name, 0.3, seed}, g, 2.0);
            CHECK(std::abs(integrate(s.rho) / g.area() - 2.0) <= 1e-14 * 2.0);
            CHECK(s.u == VectorField(g));
        }
    }
}

TEST_CASE("random preset is seeded") {
    const GridSpec g = GridSpec::make(16, 16, 1.0, 1.0);
    const State a = build_initial(InitialPreset{"random", 0.2, 5}, g, 1.0);
    const State b = build_initial(InitialPreset{"random", 0.2, 5}, g, 1.0);
    const State c = build_initial(InitialPreset{"random", 0.2, 6}, g, 1.0);
    CHECK(a.rho == b.rho);
    CHECK_FALSE(a.rho == c.rho);
}

TEST_CASE("vortex vanishes on the walls") {
    const GridSpec g = GridSpec::make(20, 20, 1.0, 1.0);
    const State s = build_initial(InitialPreset{"vortex", 0.5, 1}, g, 1.0);
    CHECK(s.u.boundary_is_zero());
    CHECK(l2_norm(s.u) > 0.0);
    for (double r : s.rho.values().data()) CHECK(r == 1.0);
}

TEST_CASE("preset errors") {
    const GridSpec g = GridSpec::make(8, 8, 1.0, 1.0);
    CHECK_THROWS_AS(build_initial(InitialPreset{"shock", 0.1, 1}, g, 1.0), DomainError);
    CHECK_THROWS_AS(build_initial(InitialPreset{"random", -0.1, 1}, g, 1.0), DomainError);
    try {
        build_initial(InitialPreset{"gaussian-bump", 50.0, 1}, g, 1.0);
        FAIL("expected a negative density to be rejected");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("min") != std::string::npos);
    }
}
