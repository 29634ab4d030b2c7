/// @file bogovskii.hpp
/// @brief Discrete solution operator for div v = f with v = 0 on the
/// boundary.
///
/// Among all no-slip face fields with divergence f - mean(f), B[f] is the
/// one of least discrete gradient energy. It is computed from the Stokes-type
/// saddle system
///
///     -laplacian(v) + grad(q) = 0,    div(v) = f - mean(f),
///
/// by conjugate gradients on the Schur complement S q = -div(A^{-1} grad q)
/// (A = -laplacian), each application costing one vector Poisson solve.
#pragma once

#include <cstdint>
#include <memory>

#include "isodecay/grid.hpp"
#include "isodecay/poisson.hpp"

namespace isodecay {

enum class InnerSolver { spectral, cg };

struct SaddleSolverConfig {
    double tol = 1e-9;       // relative divergence residual target
    int max_iter = 0;        // 0 selects 10 * (nx + ny)
    double mean_tol = 1e-10; // compatibility threshold
    InnerSolver inner = InnerSolver::spectral;

    int effective_max_iter(const GridSpec& g) const {
        return max_iter > 0 ? max_iter : 10 * (g.nx + g.ny);
    }

    friend bool operator==(const SaddleSolverConfig&, const SaddleSolverConfig&) = default;
};

struct BogovskiiProblem {
    ScalarField f;
    /// Magnitude the mean of f is measured against in addition to ||f||.
    /// Data of the form rho - rho_s carries round-off proportional to rho
    /// itself, so callers pass ||rho|| here.
    double reference_scale = 0.0;
};

struct BogovskiiSolution {
    VectorField v;
    ScalarField multiplier;
    double residual_div = 0.0;       // ||div v - (f - mean f)||
    double relative_residual = 0.0;  // residual_div / ||f - mean f||
    double removed_mean = 0.0;
    int iterations = 0;
};

class BogovskiiSolver {
public:
    explicit BogovskiiSolver(const GridSpec& grid, SaddleSolverConfig config = {});
    ~BogovskiiSolver();
    BogovskiiSolver(BogovskiiSolver&&) noexcept;
    BogovskiiSolver& operator=(BogovskiiSolver&&) noexcept;

    /// Throws CompatibilityError when the mean of f is grossly nonzero and
    /// IterationLimitError when the tolerance is not met within max_iter.
    BogovskiiSolution solve(const BogovskiiProblem& problem);
    BogovskiiSolution solve(const ScalarField& f) { return solve(BogovskiiProblem{f}); }

    const GridSpec& grid() const { return grid_; }
    const SaddleSolverConfig& config() const { return config_; }

private:
    GridSpec grid_;
    SaddleSolverConfig config_;
    std::unique_ptr<FacePoissonSolver> poisson_;
};

BogovskiiSolution solve(const BogovskiiProblem& problem, const GridSpec& grid,
                        const SaddleSolverConfig& config = {});

struct SolutionGradient {
    VelocityGradient grad;
    TensorFieldNorms norms;
};

SolutionGradient gradient_of_solution(const BogovskiiSolution& sol);

/// max over n_trials seeded white-noise zero-mean f of ||B f||_{W^{1,2}} / ||f||.
double operator_norm_probe(const GridSpec& grid, const SaddleSolverConfig& config, int n_trials,
                           std::uint64_t seed);

/// ||B[div g]|| / ||g|| for g with zero boundary faces. Throws InternalError
/// when div g fails the compatibility check (that would mean the discrete
/// divergence theorem is broken).
double divergence_form_probe(const VectorField& g, BogovskiiSolver& solver);
double divergence_form_probe(const VectorField& g, const GridSpec& grid,
                             const SaddleSolverConfig& config = {});

/// Minimum-energy solution by a dense LU factorization of the full KKT
/// system. For cross-checking on small grids (at most 16 x 16).
struct DenseKktSolution {
    VectorField v;
    ScalarField multiplier;
};
DenseKktSolution dense_kkt_solve(const ScalarField& f);

}  // namespace isodecay
