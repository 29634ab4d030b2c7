#include "isodecay/poisson.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "isodecay/errors.hpp"

namespace isodecay {

// One face component: an n_slow x n_fast interior block (x fastest) with
// its own forward/backward plans and eigenvalues.
struct SpectralFacePoisson::Block {
    int n_slow = 0;
    int n_fast = 0;
    double* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<double> eig_slow;
    std::vector<double> eig_fast;
    double scale = 1.0;

    // dst1_slow: true when the slow (y) direction has zero boundary faces.
    Block(int slow, int fast, bool dst1_slow, double h_slow, double h_fast)
        : n_slow(slow), n_fast(fast) {
        buffer = fftw_alloc_real(static_cast<std::size_t>(slow) * fast);
        const fftw_r2r_kind fwd_slow = dst1_slow ? FFTW_RODFT00 : FFTW_RODFT10;
        const fftw_r2r_kind bwd_slow = dst1_slow ? FFTW_RODFT00 : FFTW_RODFT01;
        const fftw_r2r_kind fwd_fast = dst1_slow ? FFTW_RODFT10 : FFTW_RODFT00;
        const fftw_r2r_kind bwd_fast = dst1_slow ? FFTW_RODFT01 : FFTW_RODFT00;
        // ESTIMATE keeps the plan (and hence the rounding) independent of timing.
        forward = fftw_plan_r2r_2d(slow, fast, buffer, buffer, fwd_slow, fwd_fast, FFTW_ESTIMATE);
        backward = fftw_plan_r2r_2d(slow, fast, buffer, buffer, bwd_slow, bwd_fast, FFTW_ESTIMATE);
        if (forward == nullptr || backward == nullptr) {
            throw NumericalError("FFTW plan creation failed");
        }
        // DST-I of length n has modes sin(pi k m / (n+1)); DST-II of length n
        // has modes sin(pi k (m + 1/2) / n); k = 1..n in both cases.
        auto eigenvalues = [](int n, bool dst1, double h) {
            std::vector<double> e(n);
            const int period = dst1 ? n + 1 : n;
            for (int k = 0; k < n; ++k) {
                e[k] = (2.0 - 2.0 * std::cos(std::numbers::pi * (k + 1) / period)) / (h * h);
            }
            return e;
        };
        eig_slow = eigenvalues(slow, dst1_slow, h_slow);
        eig_fast = eigenvalues(fast, !dst1_slow, h_fast);
        const double norm_slow = dst1_slow ? 2.0 * (slow + 1) : 2.0 * slow;
        const double norm_fast = dst1_slow ? 2.0 * fast : 2.0 * (fast + 1);
        scale = 1.0 / (norm_slow * norm_fast);
    }

    ~Block() {
        if (forward != nullptr) fftw_destroy_plan(forward);
        if (backward != nullptr) fftw_destroy_plan(backward);
        fftw_free(buffer);
    }
    Block(const Block&) = delete;
    Block& operator=(const Block&) = delete;

    void solve_in_place() {
        fftw_execute(forward);
        for (int s = 0; s < n_slow; ++s) {
            for (int f = 0; f < n_fast; ++f) {
                buffer[static_cast<std::size_t>(s) * n_fast + f] *= scale / (eig_slow[s] + eig_fast[f]);
            }
        }
        fftw_execute(backward);
    }
};

SpectralFacePoisson::SpectralFacePoisson(const GridSpec& grid) : grid_(grid) {
    // x velocity: interior faces i = 1..nx-1 (zero boundary faces, DST-I in x),
    // j = 0..ny-1 (reflected walls, DST-II in y).
    x_block_ = std::make_unique<Block>(grid.ny, grid.nx - 1, false, grid.dy(), grid.dx());
    // y velocity: interior faces j = 1..ny-1 (DST-I in y), i = 0..nx-1 (DST-II in x).
    y_block_ = std::make_unique<Block>(grid.ny - 1, grid.nx, true, grid.dy(), grid.dx());
}

SpectralFacePoisson::~SpectralFacePoisson() = default;

VectorField SpectralFacePoisson::solve(const VectorField& rhs) {
    require_same_grid(grid_, rhs.grid(), "SpectralFacePoisson::solve");
    const int nx = grid_.nx;
    const int ny = grid_.ny;
    VectorField v(grid_);

    Block& bx = *x_block_;
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) bx.buffer[static_cast<std::size_t>(j) * (nx - 1) + (i - 1)] = rhs.ux(i, j);
    }
    bx.solve_in_place();
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) v.ux(i, j) = bx.buffer[static_cast<std::size_t>(j) * (nx - 1) + (i - 1)];
    }

    Block& by = *y_block_;
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) by.buffer[static_cast<std::size_t>(j - 1) * nx + i] = rhs.uy(i, j);
    }
    by.solve_in_place();
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) v.uy(i, j) = by.buffer[static_cast<std::size_t>(j - 1) * nx + i];
    }
    return v;
}

CgFacePoisson::CgFacePoisson(const GridSpec& grid, double rel_tol, int max_iter)
    : grid_(grid), rel_tol_(rel_tol), max_iter_(max_iter > 0 ? max_iter : 40 * (grid.nx + grid.ny) + 100) {}

namespace {

// y += a * x over both components
void axpy(double a, const VectorField& x, VectorField& y) {
    auto& yx = y.ux_array().data();
    const auto& xx = x.ux_array().data();
    for (std::size_t k = 0; k < yx.size(); ++k) yx[k] += a * xx[k];
    auto& yy = y.uy_array().data();
    const auto& xy = x.uy_array().data();
    for (std::size_t k = 0; k < yy.size(); ++k) yy[k] += a * xy[k];
}

// p = r + b * p
void xpby(const VectorField& r, double b, VectorField& p) {
    auto& px = p.ux_array().data();
    const auto& rx = r.ux_array().data();
    for (std::size_t k = 0; k < px.size(); ++k) px[k] = rx[k] + b * px[k];
    auto& py = p.uy_array().data();
    const auto& ry = r.uy_array().data();
    for (std::size_t k = 0; k < py.size(); ++k) py[k] = ry[k] + b * py[k];
}

}  // namespace

VectorField CgFacePoisson::solve(const VectorField& rhs) {
    require_same_grid(grid_, rhs.grid(), "CgFacePoisson::solve");
    VectorField b = rhs;
    b.zero_boundary();
    VectorField x(grid_);
    VectorField r = b;
    VectorField p = r;
    double rr = inner(r, r);
    const double target = rel_tol_ * rel_tol_ * rr;
    last_iterations_ = 0;
    if (rr == 0.0) return x;
    for (int it = 1; it <= max_iter_; ++it) {
        VectorField ap = laplacian(p);
        // A = -laplacian
        const double pap = -inner(p, ap);
        const double alpha = rr / pap;
        axpy(alpha, p, x);
        axpy(alpha, ap, r);  // r -= alpha * A p
        r.zero_boundary();
        const double rr_new = inner(r, r);
        last_iterations_ = it;
        if (rr_new <= target) return x;
        xpby(r, rr_new / rr, p);
        rr = rr_new;
    }
    std::ostringstream os;
    os << "face Poisson CG did not converge in " << max_iter_ << " iterations";
    throw IterationLimitError(os.str(), std::sqrt(rr));
}

}  // namespace isodecay
