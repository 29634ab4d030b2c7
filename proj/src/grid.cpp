#include "isodecay/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isodecay/errors.hpp"

namespace isodecay {

GridSpec GridSpec::make(int nx, int ny, double lx, double ly) {
    if (nx < 4 || ny < 4) {
        std::ostringstream os;
        os << "grid needs at least 4 cells per direction, got " << nx << "x" << ny;
        throw DomainError(os.str());
    }
    if (!(lx > 0.0) || !(ly > 0.0)) {
        throw DomainError("grid side lengths must be positive");
    }
    return GridSpec{nx, ny, lx, ly};
}

void Array2D::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(grid.nx, grid.ny) {
    if (values.size() != values_.size()) {
        std::ostringstream os;
        os << "scalar field expects " << values_.size() << " values, got " << values.size();
        throw ShapeError(os.str());
    }
    values_.data() = std::move(values);
}

double ScalarField::min() const {
    return *std::min_element(values_.data().begin(), values_.data().end());
}

double ScalarField::max() const {
    return *std::max_element(values_.data().begin(), values_.data().end());
}

void VectorField::zero_boundary() {
    for (int j = 0; j < grid_.ny; ++j) {
        ux_(0, j) = 0.0;
        ux_(grid_.nx, j) = 0.0;
    }
    for (int i = 0; i < grid_.nx; ++i) {
        uy_(i, 0) = 0.0;
        uy_(i, grid_.ny) = 0.0;
    }
}

bool VectorField::boundary_is_zero() const {
    for (int j = 0; j < grid_.ny; ++j) {
        if (ux_(0, j) != 0.0 || ux_(grid_.nx, j) != 0.0) return false;
    }
    for (int i = 0; i < grid_.nx; ++i) {
        if (uy_(i, 0) != 0.0 || uy_(i, grid_.ny) != 0.0) return false;
    }
    return true;
}

double VectorField::max_abs() const {
    double m = 0.0;
    for (double v : ux_.data()) m = std::max(m, std::abs(v));
    for (double v : uy_.data()) m = std::max(m, std::abs(v));
    return m;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) {
        std::ostringstream os;
        os << what << ": grid mismatch (" << a.nx << "x" << a.ny << " vs " << b.nx << "x"
           << b.ny << ")";
        throw ShapeError(os.str());
    }
}

ScalarField divergence(const VectorField& w) {
    const GridSpec& g = w.grid();
    const double idx = 1.0 / g.dx();
    const double idy = 1.0 / g.dy();
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            out(i, j) = (w.ux(i + 1, j) - w.ux(i, j)) * idx + (w.uy(i, j + 1) - w.uy(i, j)) * idy;
        }
    }
    return out;
}

VectorField gradient(const ScalarField& phi) {
    const GridSpec& g = phi.grid();
    const double idx = 1.0 / g.dx();
    const double idy = 1.0 / g.dy();
    VectorField out(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {
            out.ux(i, j) = (phi(i, j) - phi(i - 1, j)) * idx;
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            out.uy(i, j) = (phi(i, j) - phi(i, j - 1)) * idy;
        }
    }
    return out;
}

double integrate(const ScalarField& phi) {
    double s = 0.0;
    for (double v : phi.values().data()) s += v;
    return s * phi.grid().cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "inner");
    const auto& av = a.values().data();
    const auto& bv = b.values().data();
    double s = 0.0;
    for (std::size_t k = 0; k < av.size(); ++k) s += av[k] * bv[k];
    return s * a.grid().cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
    require_same_grid(a.grid(), b.grid(), "inner");
    double s = 0.0;
    const auto& ax = a.ux_array().data();
    const auto& bx = b.ux_array().data();
    for (std::size_t k = 0; k < ax.size(); ++k) s += ax[k] * bx[k];
    const auto& ay = a.uy_array().data();
    const auto& by = b.uy_array().data();
    for (std::size_t k = 0; k < ay.size(); ++k) s += ay[k] * by[k];
    return s * a.grid().cell_volume();
}

double l2_norm(const ScalarField& a) { return std::sqrt(inner(a, a)); }
double l2_norm(const VectorField& a) { return std::sqrt(inner(a, a)); }

VectorField laplacian(const VectorField& w) {
    const GridSpec& g = w.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    const double idx2 = 1.0 / (g.dx() * g.dx());
    const double idy2 = 1.0 / (g.dy() * g.dy());
    VectorField out(g);

    for (int j = 0; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
            const double c = w.ux(i, j);
            const double s = j > 0 ? w.ux(i, j - 1) : -c;
            const double n = j < ny - 1 ? w.ux(i, j + 1) : -c;
            out.ux(i, j) = (w.ux(i + 1, j) - 2.0 * c + w.ux(i - 1, j)) * idx2 + (n - 2.0 * c + s) * idy2;
        }
    }
    for (int j = 1; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const double c = w.uy(i, j);
            const double west = i > 0 ? w.uy(i - 1, j) : -c;
            const double east = i < nx - 1 ? w.uy(i + 1, j) : -c;
            out.uy(i, j) = (east - 2.0 * c + west) * idx2 + (w.uy(i, j + 1) - 2.0 * c + w.uy(i, j - 1)) * idy2;
        }
    }
    return out;
}

VelocityGradient velocity_gradient(const VectorField& u) {
    const GridSpec& g = u.grid();
    const int nx = g.nx;
    const int ny = g.ny;
    const double idx = 1.0 / g.dx();
    const double idy = 1.0 / g.dy();

    VelocityGradient out{g, Array2D(nx, ny), Array2D(nx, ny), Array2D(nx + 1, ny + 1),
                         Array2D(nx + 1, ny + 1)};
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            out.dux_dx(i, j) = (u.ux(i + 1, j) - u.ux(i, j)) * idx;
            out.duy_dy(i, j) = (u.uy(i, j + 1) - u.uy(i, j)) * idy;
        }
    }
    // Off-diagonal entries at nodes; ghosts reflect so the wall value is 0.
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const double below = j > 0 ? u.ux(i, j - 1) : -u.ux(i, j);
            const double above = j < ny ? u.ux(i, j) : -u.ux(i, j - 1);
            out.dux_dy(i, j) = (above - below) * idy;

            const double left = i > 0 ? u.uy(i - 1, j) : -u.uy(i, j);
            const double right = i < nx ? u.uy(i, j) : -u.uy(i - 1, j);
            out.duy_dx(i, j) = (right - left) * idx;
        }
    }
    return out;
}

double contract(const VelocityGradient& a, const VelocityGradient& b) {
    require_same_grid(a.grid, b.grid, "contract");
    const int nx = a.grid.nx;
    const int ny = a.grid.ny;
    double cells = 0.0;
    for (std::size_t k = 0; k < a.dux_dx.size(); ++k) {
        cells += a.dux_dx.data()[k] * b.dux_dx.data()[k] + a.duy_dy.data()[k] * b.duy_dy.data()[k];
    }
    double nodes = 0.0;
    for (int j = 0; j <= ny; ++j) {
        const double wy = (j == 0 || j == ny) ? 0.5 : 1.0;
        for (int i = 0; i <= nx; ++i) {
            const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
            nodes += wy * a.dux_dy(i, j) * b.dux_dy(i, j) + wx * a.duy_dx(i, j) * b.duy_dx(i, j);
        }
    }
    return (cells + nodes) * a.grid.cell_volume();
}

TensorFieldNorms velocity_norms(const VectorField& u) {
    const VelocityGradient grad = velocity_gradient(u);
    TensorFieldNorms out;
    out.grad_norm_sq = contract(grad, grad);
    double div_sq = 0.0;
    for (std::size_t k = 0; k < grad.dux_dx.size(); ++k) {
        const double d = grad.dux_dx.data()[k] + grad.duy_dy.data()[k];
        div_sq += d * d;
    }
    out.div_norm_sq = div_sq * u.grid().cell_volume();
    return out;
}

}  // namespace isodecay
