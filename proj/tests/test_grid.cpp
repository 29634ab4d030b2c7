#include <cmath>
#include <numbers>

#include "doctest.h"
#include "isodecay/errors.hpp"
#include "isodecay/grid.hpp"
#include "test_support.hpp"

using namespace isodecay;
using isodecay::testing::random_noslip;
using isodecay::testing::random_scalar;

namespace {

constexpr double pi = std::numbers::pi;

// Textbook 5-point Laplacian at interior cell (i, j), written out here
// independently of the library stencils.
double five_point(const ScalarField& phi, int i, int j) {
    const GridSpec& g = phi.grid();
    return (phi(i + 1, j) - 2.0 * phi(i, j) + phi(i - 1, j)) / (g.dx() * g.dx()) +
           (phi(i, j + 1) - 2.0 * phi(i, j) + phi(i, j - 1)) / (g.dy() * g.dy());
}

// u = (sin(pi x) sin(pi y), 0) sampled on x faces.
VectorField manufactured_velocity(const GridSpec& g) {
    VectorField u(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            u.ux(i, j) = std::sin(pi * i * g.dx()) * std::sin(pi * (j + 0.5) * g.dy());
        }
    }
    u.zero_boundary();
    return u;
}

}  // namespace

TEST_CASE("GridSpec validation") {
    CHECK_THROWS_AS(GridSpec::make(3, 8, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(GridSpec::make(8, 8, 0.0, 1.0), DomainError);
    const GridSpec g = GridSpec::make(8, 4, 2.0, 1.0);
    CHECK(g.dx() == 0.25);
    CHECK(g.cell_volume() == 0.0625);
    CHECK_THROWS_AS(ScalarField(g, std::vector<double>(5)), ShapeError);
}

TEST_CASE("divergence of constant and linear fields") {
    const GridSpec g = GridSpec::make(10, 7, 1.3, 0.9);
    VectorField c(g);
    for (double& x : c.ux_array().data()) x = 2.5;
    for (double& x : c.uy_array().data()) x = -1.5;
    const ScalarField dc = divergence(c);
    for (double v : dc.values().data()) CHECK(std::abs(v) <= 1e-14);

    VectorField lin(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) lin.ux(i, j) = i * g.dx();
    }
    const ScalarField dl = divergence(lin);
    for (double v : dl.values().data()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("gradient of constant and linear fields") {
    const GridSpec g = GridSpec::make(9, 6, 1.0, 2.0);
    CHECK(gradient(ScalarField(g, 3.0)).max_abs() == 0.0);
    ScalarField x(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) x(i, j) = x.x(i);
    }
    const VectorField gx = gradient(x);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) CHECK(gx.ux(i, j) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(gx.ux(0, j) == 0.0);
        CHECK(gx.ux(g.nx, j) == 0.0);
    }
}

TEST_CASE("summation by parts and div grad on three grid sizes") {
    std::mt19937_64 gen(11);
    for (auto [nx, ny] : {std::pair{8, 8}, std::pair{17, 12}, std::pair{40, 33}}) {
        const GridSpec g = GridSpec::make(nx, ny, 1.0, 0.7);
        for (int trial = 0; trial < 5; ++trial) {
            const VectorField w = random_noslip(g, gen);
            const ScalarField phi = random_scalar(g, gen);
            const double lhs = inner(divergence(w), phi);
            const double rhs = -inner(w, gradient(phi));
            const double scale = l2_norm(divergence(w)) * l2_norm(phi);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
        }
        for (int trial = 0; trial < 3; ++trial) {
            const ScalarField phi = random_scalar(g, gen);
            const ScalarField lap = divergence(gradient(phi));
            for (int j = 1; j < ny - 1; ++j) {
                for (int i = 1; i < nx - 1; ++i) {
                    const double ref = five_point(phi, i, j);
                    CHECK(std::abs(lap(i, j) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
                }
            }
        }
    }
}

TEST_CASE("midpoint quadrature") {
    const GridSpec unit = GridSpec::make(16, 16, 1.0, 1.0);
    CHECK(integrate(ScalarField(unit, 1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(integrate(ScalarField(unit, 0.0)) == 0.0);

    const GridSpec g = GridSpec::make(128, 128, 1.0, 1.0);
    ScalarField s(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) s(i, j) = std::sin(2 * pi * s.x(i)) * std::sin(2 * pi * s.y(j));
    }
    CHECK(std::abs(integrate(s)) <= 1e-12);
}

TEST_CASE("integrate is linear and monotone") {
    std::mt19937_64 gen(5);
    const GridSpec g = GridSpec::make(12, 9, 1.5, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const ScalarField a = random_scalar(g, gen);
        ScalarField b = a;
        const ScalarField bump = random_scalar(g, gen, 0.0, 1.0);
        for (std::size_t k = 0; k < b.values().size(); ++k) b.values().data()[k] += bump.values().data()[k];
        CHECK(integrate(a) <= integrate(b));
        ScalarField comb(g);
        for (std::size_t k = 0; k < comb.values().size(); ++k) {
            comb.values().data()[k] = 2.0 * a.values().data()[k] - 3.0 * b.values().data()[k];
        }
        CHECK(integrate(comb) == doctest::Approx(2.0 * integrate(a) - 3.0 * integrate(b)).epsilon(1e-12));
    }
}

TEST_CASE("velocity norms") {
    const GridSpec small = GridSpec::make(8, 8, 1.0, 1.0);
    const TensorFieldNorms zero = velocity_norms(VectorField(small));
    CHECK(zero.grad_norm_sq == 0.0);
    CHECK(zero.div_norm_sq == 0.0);

    // int (d_x u)^2 + (d_y u)^2 = pi^2/4 + pi^2/4 for u = sin(pi x) sin(pi y)
    const GridSpec g = GridSpec::make(256, 256, 1.0, 1.0);
    const TensorFieldNorms n = velocity_norms(manufactured_velocity(g));
    CHECK(n.grad_norm_sq == doctest::Approx(pi * pi / 2).epsilon(0.01));
    CHECK(n.div_norm_sq == doctest::Approx(pi * pi / 4).epsilon(0.01));

    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 10; ++trial) {
        const TensorFieldNorms r = velocity_norms(random_noslip(small, gen));
        CHECK(r.grad_norm_sq >= 0.0);
        CHECK(r.div_norm_sq >= 0.0);
    }
}

TEST_CASE("gradient contraction equals the Laplacian bilinear form") {
    std::mt19937_64 gen(21);
    const GridSpec g = GridSpec::make(13, 10, 1.0, 0.8);
    for (int trial = 0; trial < 5; ++trial) {
        const VectorField a = random_noslip(g, gen);
        const VectorField b = random_noslip(g, gen);
        const double by_components = contract(velocity_gradient(a), velocity_gradient(b));
        const double by_form = -inner(a, laplacian(b));
        CHECK(by_components == doctest::Approx(by_form).epsilon(1e-12));
        CHECK(laplacian(b).boundary_is_zero());
    }
}

TEST_CASE("grid mismatch is a shape error") {
    const GridSpec a = GridSpec::make(8, 8, 1.0, 1.0);
    const GridSpec b = GridSpec::make(8, 9, 1.0, 1.0);
    CHECK_THROWS_AS(inner(ScalarField(a), ScalarField(b)), ShapeError);
    CHECK_THROWS_AS(inner(VectorField(a), VectorField(b)), ShapeError);
}
