/// @file fluid.hpp
/// @brief Isentropic thermodynamics and state bookkeeping: the gamma-law
/// pressure, the equilibrium density, the relative-entropy integrand and
/// the energy / dissipation functionals.
#pragma once

#include "isodecay/grid.hpp"

namespace isodecay {

/// Fluid constants. The pressure law is P = rho^gamma (unit prefactor).
struct FluidParams {
    double gamma = 1.4;
    double mu = 0.1;
    double lambda = 0.0;
    double rho_bar = 4.0;

    /// Throws DomainError unless gamma > 1, mu > 0, lambda + mu >= 0
    /// (the two-dimensional form of lambda + (2/N) mu >= 0) and rho_bar > 0.
    void validate() const;

    friend bool operator==(const FluidParams&, const FluidParams&) = default;
};

struct State {
    double t = 0.0;
    ScalarField rho;
    VectorField u;
};

struct EquilibriumState {
    double rho_s = 0.0;
};

/// Pointwise rho^gamma. Throws DomainError naming the first negative cell.
ScalarField pressure(const ScalarField& rho, const FluidParams& params);

/// Mean density. Throws DegenerateDataError on zero total mass and
/// DomainError on negative density.
EquilibriumState compute_rho_s(const ScalarField& rho0);

/// Relative-entropy integrand f(r) = r * int_{r0}^{r} (h^gamma - r0^gamma) / h^2 dh
/// in closed form: r^gamma/(gamma-1) + r0^gamma - gamma r r0^(gamma-1)/(gamma-1).
double entropy_f(double r, double r0, const FluidParams& params);

/// The same integral evaluated by adaptive Gauss-Kronrod quadrature of the
/// defining integrand (in the variable s = log h). Independent of
/// entropy_f(); used to validate it. At r = 0 returns the continuous
/// extension r0^gamma.
double entropy_f_quadrature(double r, double r0, const FluidParams& params, double tol = 1e-10);

/// g(r) = f(r) / (r - r0)^2, with the removable singularity at r0 filled by
/// its limit (gamma/2) r0^(gamma-2).
double entropy_ratio(double r, double r0, const FluidParams& params);

struct EntropyBounds {
    double k1 = 0.0;  // min of g over the samples
    double k2 = 0.0;  // max of g over the samples
};

/// Samples g on n_samples uniform points of [0, r_max] and returns its
/// extremes, so that k1 (r-r0)^2 <= f(r) <= k2 (r-r0)^2 on the samples.
EntropyBounds entropy_bounds_probe(double r0, double r_max, const FluidParams& params,
                                   int n_samples = 4001);

/// Minimum of (r^gamma - r0^gamma)/(r - r0) over the same sampling of
/// [0, r_max]; lower bound for the pressure coercivity integrand.
double pressure_coercivity_probe(double r0, double r_max, const FluidParams& params,
                                 int n_samples = 4001);

/// Velocity averaged from faces to cell centers.
struct CellVelocity {
    Array2D ux;
    Array2D uy;
};
CellVelocity cell_velocity(const VectorField& u);

/// Face density used for momentum: arithmetic mean of the two adjacent
/// cells on interior faces, zero on boundary faces.
VectorField face_density(const ScalarField& rho);

/// Mass flux rho_face * u on faces (face density from face_density()).
VectorField momentum(const ScalarField& rho, const VectorField& u);

/// int 1/2 rho |u|^2 with u averaged to cell centers.
double kinetic_energy(const State& state);
double internal_energy(const ScalarField& rho, const FluidParams& params);
/// E = kinetic + internal.
double total_energy(const State& state, const FluidParams& params);
/// mu * int |grad u|^2 + (lambda + mu) * int (div u)^2.
double dissipation(const State& state, const FluidParams& params);

}  // namespace isodecay
