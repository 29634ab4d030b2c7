#include "isodecay/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "isodecay/errors.hpp"

namespace isodecay {

void FluidParams::validate() const {
    if (!(gamma > 1.0)) throw DomainError("gamma must exceed 1");
    if (!(mu > 0.0)) throw DomainError("mu must be positive");
    if (!(lambda + mu >= 0.0)) {
        throw DomainError("lambda + mu must be nonnegative (lambda + (2/N) mu >= 0 with N = 2)");
    }
    if (!(rho_bar > 0.0)) throw DomainError("rho_bar must be positive");
}

ScalarField pressure(const ScalarField& rho, const FluidParams& params) {
    const GridSpec& g = rho.grid();
    ScalarField p(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double r = rho(i, j);
            if (r < 0.0) {
                std::ostringstream os;
                os << "negative density " << r << " in cell (" << i << ", " << j << ")";
                throw DomainError(os.str());
            }
            p(i, j) = std::pow(r, params.gamma);
        }
    }
    return p;
}

EquilibriumState compute_rho_s(const ScalarField& rho0) {
    if (rho0.min() < 0.0) throw DomainError("initial density has negative cells");
    const double mass = integrate(rho0);
    if (!(mass > 0.0)) throw DegenerateDataError("total mass is zero; no equilibrium density");
    return {mass / rho0.grid().area()};
}

namespace {

void check_entropy_args(double r, double r0) {
    if (r < 0.0) throw DomainError("entropy integrand needs r >= 0");
    if (!(r0 > 0.0)) throw DomainError("entropy integrand needs r0 > 0");
}

// sum_{n>=2} binom(gamma, n) d^(n-2), so that for r = r0 (1 + d)
// f(r) = r0^gamma d^2 S / (gamma - 1). Used near r0, where the closed form
// cancels catastrophically.
double near_equilibrium_series(double d, double gamma) {
    double coef = 0.5 * gamma * (gamma - 1.0);  // binom(gamma, 2)
    double power = 1.0;
    double sum = coef;
    for (int n = 3; n < 200; ++n) {
        coef *= (gamma - n + 1.0) / n;
        power *= d;
        const double term = coef * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

constexpr double series_radius = 0.25;

}  // namespace

double entropy_f(double r, double r0, const FluidParams& params) {
    check_entropy_args(r, r0);
    const double gm = params.gamma;
    const double d = (r - r0) / r0;
    if (std::abs(d) <= series_radius) {
        return std::pow(r0, gm) * d * d * near_equilibrium_series(d, gm) / (gm - 1.0);
    }
    const double r0g1 = std::pow(r0, gm - 1.0);
    return std::pow(r, gm) / (gm - 1.0) + r0g1 * r0 - gm * r * r0g1 / (gm - 1.0);
}

double entropy_f_quadrature(double r, double r0, const FluidParams& params, double tol) {
    check_entropy_args(r, r0);
    if (r == 0.0) return std::pow(r0, params.gamma);
    if (r == r0) return 0.0;
    const double gm = params.gamma;
    const double r0g = std::pow(r0, gm);
    // h = exp(s): (h^gamma - r0^gamma) / h^2 dh = (h^(gamma-1) - r0^gamma / h) ds
    auto integrand = [gm, r0g](double s) { return std::exp((gm - 1.0) * s) - r0g * std::exp(-s); };
    using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double a = std::log(std::min(r, r0));
    const double b = std::log(std::max(r, r0));
    double value = Quad::integrate(integrand, a, b, 15, tol);
    if (r < r0) value = -value;
    return r * value;
}

double entropy_ratio(double r, double r0, const FluidParams& params) {
    check_entropy_args(r, r0);
    const double gm = params.gamma;
    const double rel = (r - r0) / r0;
    if (std::abs(rel) <= series_radius) {
        return std::pow(r0, gm - 2.0) * near_equilibrium_series(rel, gm) / (gm - 1.0);
    }
    const double d = r - r0;
    return entropy_f(r, r0, params) / (d * d);
}

EntropyBounds entropy_bounds_probe(double r0, double r_max, const FluidParams& params,
                                   int n_samples) {
    if (!(r0 > 0.0) || !(r_max > r0)) throw DomainError("entropy probe needs 0 < r0 < r_max");
    if (n_samples < 100) throw DomainError("entropy probe needs at least 100 samples");
    EntropyBounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (int k = 0; k < n_samples; ++k) {
        const double r = r_max * k / (n_samples - 1);
        const double g = entropy_ratio(r, r0, params);
        b.k1 = std::min(b.k1, g);
        b.k2 = std::max(b.k2, g);
    }
    // The puncture itself may fall between samples; its limit is a valid value of g.
    const double at_r0 = entropy_ratio(r0, r0, params);
    b.k1 = std::min(b.k1, at_r0);
    b.k2 = std::max(b.k2, at_r0);
    return b;
}

double pressure_coercivity_probe(double r0, double r_max, const FluidParams& params,
                                 int n_samples) {
    if (!(r0 > 0.0) || !(r_max > r0)) throw DomainError("coercivity probe needs 0 < r0 < r_max");
    const double gm = params.gamma;
    const double r0g = std::pow(r0, gm);
    double m = gm * std::pow(r0, gm - 1.0);  // value at the puncture
    for (int k = 0; k < n_samples; ++k) {
        const double r = r_max * k / (n_samples - 1);
        if (r == r0) continue;
        m = std::min(m, (std::pow(r, gm) - r0g) / (r - r0));
    }
    return m;
}

CellVelocity cell_velocity(const VectorField& u) {
    const GridSpec& g = u.grid();
    CellVelocity c{Array2D(g.nx, g.ny), Array2D(g.nx, g.ny)};
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            c.ux(i, j) = 0.5 * (u.ux(i, j) + u.ux(i + 1, j));
            c.uy(i, j) = 0.5 * (u.uy(i, j) + u.uy(i, j + 1));
        }
    }
    return c;
}

VectorField face_density(const ScalarField& rho) {
    const GridSpec& g = rho.grid();
    VectorField f(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) f.ux(i, j) = 0.5 * (rho(i - 1, j) + rho(i, j));
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) f.uy(i, j) = 0.5 * (rho(i, j - 1) + rho(i, j));
    }
    return f;
}

VectorField momentum(const ScalarField& rho, const VectorField& u) {
    require_same_grid(rho.grid(), u.grid(), "momentum");
    VectorField m = face_density(rho);
    auto& mx = m.ux_array().data();
    const auto& ux = u.ux_array().data();
    for (std::size_t k = 0; k < mx.size(); ++k) mx[k] *= ux[k];
    auto& my = m.uy_array().data();
    const auto& uy = u.uy_array().data();
    for (std::size_t k = 0; k < my.size(); ++k) my[k] *= uy[k];
    return m;
}

double kinetic_energy(const State& state) {
    require_same_grid(state.rho.grid(), state.u.grid(), "kinetic_energy");
    const CellVelocity c = cell_velocity(state.u);
    const auto& rho = state.rho.values().data();
    double s = 0.0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        s += rho[k] * (c.ux.data()[k] * c.ux.data()[k] + c.uy.data()[k] * c.uy.data()[k]);
    }
    return 0.5 * s * state.rho.grid().cell_volume();
}

double internal_energy(const ScalarField& rho, const FluidParams& params) {
    return integrate(pressure(rho, params)) / (params.gamma - 1.0);
}

double total_energy(const State& state, const FluidParams& params) {
    return kinetic_energy(state) + internal_energy(state.rho, params);
}

double dissipation(const State& state, const FluidParams& params) {
    const TensorFieldNorms n = velocity_norms(state.u);
    return params.mu * n.grad_norm_sq + (params.lambda + params.mu) * n.div_norm_sq;
}

}  // namespace isodecay
