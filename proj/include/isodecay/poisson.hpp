#pragma once

#include <memory>

#include "isodecay/grid.hpp"

namespace isodecay {

/// Solves -laplacian(v) = b for a no-slip face field v (see laplacian() in
/// grid.hpp). Implementations keep their own workspace, so one instance
/// must not be shared between threads.
class FacePoissonSolver {
public:
    virtual ~FacePoissonSolver() = default;
    virtual VectorField solve(const VectorField& rhs) = 0;
    virtual const GridSpec& grid() const = 0;
};

/// Exact solve by fast sine transforms. Both components diagonalize:
/// DST-I across the direction with zero boundary faces and DST-II across
/// the direction with reflected ghosts.
class SpectralFacePoisson final : public FacePoissonSolver {
public:
    explicit SpectralFacePoisson(const GridSpec& grid);
    ~SpectralFacePoisson() override;
    SpectralFacePoisson(const SpectralFacePoisson&) = delete;
    SpectralFacePoisson& operator=(const SpectralFacePoisson&) = delete;

    VectorField solve(const VectorField& rhs) override;
    const GridSpec& grid() const override { return grid_; }

private:
    struct Block;
    GridSpec grid_;
    std::unique_ptr<Block> x_block_;
    std::unique_ptr<Block> y_block_;
};

/// Unpreconditioned conjugate gradients on the 5-point operator.
class CgFacePoisson final : public FacePoissonSolver {
public:
    CgFacePoisson(const GridSpec& grid, double rel_tol, int max_iter = 0);

    VectorField solve(const VectorField& rhs) override;
    const GridSpec& grid() const override { return grid_; }
    int last_iterations() const { return last_iterations_; }

private:
    GridSpec grid_;
    double rel_tol_;
    int max_iter_;
    int last_iterations_ = 0;
};

}  // namespace isodecay
