#include "isodecay/bogovskii.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "isodecay/errors.hpp"
#include "isodecay/random.hpp"

namespace isodecay {

BogovskiiSolver::BogovskiiSolver(const GridSpec& grid, SaddleSolverConfig config)
    : grid_(grid), config_(config) {
    if (!(config_.tol > 0.0)) throw DomainError("Bogovskii tolerance must be positive");
    if (config_.max_iter < 0) throw DomainError("Bogovskii max_iter must be positive");
    if (config_.inner == InnerSolver::spectral) {
        poisson_ = std::make_unique<SpectralFacePoisson>(grid);
    } else {
        poisson_ = std::make_unique<CgFacePoisson>(grid, config_.tol / 10.0);
    }
}

BogovskiiSolver::~BogovskiiSolver() = default;
BogovskiiSolver::BogovskiiSolver(BogovskiiSolver&&) noexcept = default;
BogovskiiSolver& BogovskiiSolver::operator=(BogovskiiSolver&&) noexcept = default;

namespace {

void subtract_mean(ScalarField& f) {
    const double mean = integrate(f) / f.grid().area();
    for (double& x : f.values().data()) x -= mean;
}

void add_scaled(ScalarField& y, double a, const ScalarField& x) {
    auto& yd = y.values().data();
    const auto& xd = x.values().data();
    for (std::size_t k = 0; k < yd.size(); ++k) yd[k] += a * xd[k];
}

void add_scaled(VectorField& y, double a, const VectorField& x) {
    auto& yx = y.ux_array().data();
    const auto& xx = x.ux_array().data();
    for (std::size_t k = 0; k < yx.size(); ++k) yx[k] += a * xx[k];
    auto& yy = y.uy_array().data();
    const auto& xy = x.uy_array().data();
    for (std::size_t k = 0; k < yy.size(); ++k) yy[k] += a * xy[k];
}

ScalarField difference(const ScalarField& a, const ScalarField& b) {
    ScalarField d = a;
    add_scaled(d, -1.0, b);
    return d;
}

}  // namespace

BogovskiiSolution BogovskiiSolver::solve(const BogovskiiProblem& problem) {
    require_same_grid(grid_, problem.f.grid(), "BogovskiiSolver::solve");
    const double area = grid_.area();
    const double mean = integrate(problem.f) / area;
    const double f_norm = l2_norm(problem.f);
    // ||mean|| in L2 is |mean| * sqrt(area)
    if (std::abs(mean) * std::sqrt(area) > config_.mean_tol * (f_norm + problem.reference_scale)) {
        std::ostringstream os;
        os << "right-hand side is not mean-zero: mean " << mean << ", ||f|| " << f_norm;
        throw CompatibilityError(os.str());
    }

    ScalarField target = problem.f;
    subtract_mean(target);
    const double target_norm = l2_norm(target);

    BogovskiiSolution sol{VectorField(grid_), ScalarField(grid_), 0.0, 0.0, mean, 0};
    if (target_norm == 0.0) return sol;

    const int max_iter = config_.effective_max_iter(grid_);
    const double goal = config_.tol * target_norm;

    // Returns w = A^{-1}(-grad p), so that div w = S p.
    auto velocity_of = [this](const ScalarField& p) {
        VectorField rhs = gradient(p);
        for (double& x : rhs.ux_array().data()) x = -x;
        for (double& x : rhs.uy_array().data()) x = -x;
        return poisson_->solve(rhs);
    };

    int it = 0;
    double residual = target_norm;
    while (it < max_iter) {
        // (Re)start from the true residual.
        ScalarField r = difference(target, divergence(sol.v));
        subtract_mean(r);
        residual = l2_norm(r);
        if (residual <= goal) break;
        ScalarField p = r;
        double rr = residual * residual;
        const int restart_at = it;
        while (it < max_iter) {
            const VectorField w = velocity_of(p);
            const ScalarField sp = divergence(w);
            const double psp = inner(p, sp);
            if (!(psp > 0.0)) break;  // search direction exhausted; restart
            const double alpha = rr / psp;
            add_scaled(sol.multiplier, alpha, p);
            add_scaled(sol.v, alpha, w);
            add_scaled(r, -alpha, sp);
            subtract_mean(r);
            ++it;
            const double rr_new = inner(r, r);
            if (std::sqrt(rr_new) <= 0.5 * goal) break;
            const double beta = rr_new / rr;
            for (std::size_t k = 0; k < p.values().size(); ++k) {
                p.values().data()[k] = r.values().data()[k] + beta * p.values().data()[k];
            }
            rr = rr_new;
        }
        if (it == restart_at) break;  // no progress possible
    }
    sol.v.zero_boundary();
    sol.iterations = it;
    sol.residual_div = l2_norm(difference(divergence(sol.v), target));
    sol.relative_residual = sol.residual_div / target_norm;
    if (sol.residual_div > goal) {
        std::ostringstream os;
        os << "Bogovskii saddle solve stopped after " << it << " iterations with relative residual "
           << sol.relative_residual;
        throw IterationLimitError(os.str(), sol.relative_residual);
    }
    return sol;
}

BogovskiiSolution solve(const BogovskiiProblem& problem, const GridSpec& grid,
                        const SaddleSolverConfig& config) {
    BogovskiiSolver solver(grid, config);
    return solver.solve(problem);
}

SolutionGradient gradient_of_solution(const BogovskiiSolution& sol) {
    SolutionGradient out{velocity_gradient(sol.v), {}};
    out.norms.grad_norm_sq = contract(out.grad, out.grad);
    double div_sq = 0.0;
    for (std::size_t k = 0; k < out.grad.dux_dx.size(); ++k) {
        const double d = out.grad.dux_dx.data()[k] + out.grad.duy_dy.data()[k];
        div_sq += d * d;
    }
    out.norms.div_norm_sq = div_sq * sol.v.grid().cell_volume();
    return out;
}

double operator_norm_probe(const GridSpec& grid, const SaddleSolverConfig& config, int n_trials,
                           std::uint64_t seed) {
    if (n_trials < 1) throw DomainError("operator_norm_probe needs at least one trial");
    BogovskiiSolver solver(grid, config);
    std::mt19937_64 gen(seed);
    double worst = 0.0;
    for (int trial = 0; trial < n_trials; ++trial) {
        ScalarField f(grid);
        for (double& x : f.values().data()) x = uniform(gen, -1.0, 1.0);
        subtract_mean(f);
        const BogovskiiSolution sol = solver.solve(f);
        const double v_sq = inner(sol.v, sol.v);
        const double grad_sq = velocity_norms(sol.v).grad_norm_sq;
        worst = std::max(worst, std::sqrt(v_sq + grad_sq) / l2_norm(f));
    }
    return worst;
}

double divergence_form_probe(const VectorField& g, BogovskiiSolver& solver) {
    if (!g.boundary_is_zero()) {
        throw DomainError("divergence_form_probe needs zero normal flux on the boundary");
    }
    const double g_norm = l2_norm(g);
    if (g_norm == 0.0) return 0.0;
    const ScalarField f = divergence(g);
    // Sum of div g telescopes to the (zero) boundary flux; allow round-off
    // at the scale of the individual face terms.
    const double scale = g_norm / solver.grid().h_min();
    BogovskiiSolution sol;
    try {
        sol = solver.solve(BogovskiiProblem{f, scale});
    } catch (const CompatibilityError& e) {
        throw InternalError(std::string("div g is not mean-zero: ") + e.what());
    }
    return l2_norm(sol.v) / g_norm;
}

double divergence_form_probe(const VectorField& g, const GridSpec& grid,
                             const SaddleSolverConfig& config) {
    BogovskiiSolver solver(grid, config);
    return divergence_form_probe(g, solver);
}

DenseKktSolution dense_kkt_solve(const ScalarField& f) {
    const GridSpec& g = f.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    if (nx > 16 || ny > 16) throw DomainError("dense KKT oracle is limited to 16x16 grids");
    const double idx = 1.0 / g.dx();
    const double idy = 1.0 / g.dy();
    const double idx2 = idx * idx;
    const double idy2 = idy * idy;

    // Unknown numbering: interior x faces, interior y faces, cells, one
    // extra multiplier pinning sum(q) = 0.
    const int n_ux = (nx - 1) * ny;
    const int n_uy = nx * (ny - 1);
    const int n_v = n_ux + n_uy;
    const int n_q = nx * ny;
    const int n = n_v + n_q + 1;
    auto ux_id = [&](int i, int j) { return (i - 1) + (nx - 1) * j; };
    auto uy_id = [&](int i, int j) { return n_ux + i + nx * (j - 1); };
    auto q_id = [&](int i, int j) { return n_v + i + nx * j; };

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

    // Energy block: 5-point -laplacian on each component; a neighbor on a
    // boundary face drops out, a neighbor across a wall is a reflected
    // ghost and adds to the diagonal.
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            const int row = ux_id(i, j);
            kkt(row, row) += 2.0 * idx2 + 2.0 * idy2;
            if (i > 1) kkt(row, ux_id(i - 1, j)) -= idx2;
            if (i < nx - 1) kkt(row, ux_id(i + 1, j)) -= idx2;
            if (j > 0) kkt(row, ux_id(i, j - 1)) -= idy2; else kkt(row, row) += idy2;
            if (j < ny - 1) kkt(row, ux_id(i, j + 1)) -= idy2; else kkt(row, row) += idy2;
        }
    }
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = uy_id(i, j);
            kkt(row, row) += 2.0 * idx2 + 2.0 * idy2;
            if (j > 1) kkt(row, uy_id(i, j - 1)) -= idy2;
            if (j < ny - 1) kkt(row, uy_id(i, j + 1)) -= idy2;
            if (i > 0) kkt(row, uy_id(i - 1, j)) -= idx2; else kkt(row, row) += idx2;
            if (i < nx - 1) kkt(row, uy_id(i + 1, j)) -= idx2; else kkt(row, row) += idx2;
        }
    }
    // Divergence rows D and the -D^T coupling.
    const double mean = integrate(f) / g.area();
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int row = q_id(i, j);
            auto couple = [&](int col, double coef) {
                kkt(row, col) += coef;
                kkt(col, row) -= coef;
            };
            if (i + 1 < nx) couple(ux_id(i + 1, j), idx);
            if (i > 0) couple(ux_id(i, j), -idx);
            if (j + 1 < ny) couple(uy_id(i, j + 1), idy);
            if (j > 0) couple(uy_id(i, j), -idy);
            kkt(row, n - 1) = 1.0;
            kkt(n - 1, row) = 1.0;
            rhs(row) = f(i, j) - mean;
        }
    }

    const Eigen::VectorXd x = kkt.fullPivLu().solve(rhs);
    DenseKktSolution out{VectorField(g), ScalarField(g)};
    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) out.v.ux(i, j) = x(ux_id(i, j));
    }
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) out.v.uy(i, j) = x(uy_id(i, j));
    }
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) out.multiplier(i, j) = x(q_id(i, j));
    }
    return out;
}

}  // namespace isodecay
