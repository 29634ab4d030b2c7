/// @file grid.hpp
/// @brief Uniform MAC discretization of a rectangle and the discrete
/// operators (divergence, gradient, quadrature, velocity gradients) that the
/// solver, the Bogovskii operator and the diagnostics share.
///
/// Layout: scalars live at cell centers (i, j), 0 <= i < nx, 0 <= j < ny.
/// The x velocity lives on vertical faces (i, j), 0 <= i <= nx, at
/// x = i*dx, y = (j + 1/2)*dy; the y velocity on horizontal faces (i, j),
/// 0 <= j <= ny. Faces on the boundary carry the normal component and are
/// zero for every no-slip field. Tangential wall values are imposed through
/// reflected ghosts (u_ghost = -u_interior).
#pragma once

#include <cstddef>
#include <vector>

namespace isodecay {

struct GridSpec {
    int nx = 64;
    int ny = 64;
    double lx = 1.0;
    double ly = 1.0;

    /// Validated constructor; throws DomainError on nx, ny < 4 or
    /// nonpositive side lengths.
    static GridSpec make(int nx, int ny, double lx, double ly);

    double dx() const { return lx / nx; }
    double dy() const { return ly / ny; }
    double cell_volume() const { return dx() * dy(); }
    double area() const { return lx * ly; }
    double h_min() const { return dx() < dy() ? dx() : dy(); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Dense nx-by-ny array with x fastest in memory.
class Array2D {
public:
    Array2D() = default;
    Array2D(int nx, int ny, double fill = 0.0)
        : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * ny, fill) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int i, int j) { return data_[index(i, j)]; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    void fill(double v);

    friend bool operator==(const Array2D&, const Array2D&) = default;

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * nx_ + i;
    }

    int nx_ = 0;
    int ny_ = 0;
    std::vector<double> data_;
};

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const GridSpec& grid, double fill = 0.0)
        : grid_(grid), values_(grid.nx, grid.ny, fill) {}
    /// Throws ShapeError unless values holds nx*ny entries.
    ScalarField(const GridSpec& grid, std::vector<double> values);

    const GridSpec& grid() const { return grid_; }
    double& operator()(int i, int j) { return values_(i, j); }
    double operator()(int i, int j) const { return values_(i, j); }
    Array2D& values() { return values_; }
    const Array2D& values() const { return values_; }

    double x(int i) const { return (i + 0.5) * grid_.dx(); }
    double y(int j) const { return (j + 0.5) * grid_.dy(); }

    double min() const;
    double max() const;

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    GridSpec grid_;
    Array2D values_;
};

class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const GridSpec& grid)
        : grid_(grid), ux_(grid.nx + 1, grid.ny), uy_(grid.nx, grid.ny + 1) {}

    const GridSpec& grid() const { return grid_; }
    double& ux(int i, int j) { return ux_(i, j); }
    double ux(int i, int j) const { return ux_(i, j); }
    double& uy(int i, int j) { return uy_(i, j); }
    double uy(int i, int j) const { return uy_(i, j); }
    Array2D& ux_array() { return ux_; }
    const Array2D& ux_array() const { return ux_; }
    Array2D& uy_array() { return uy_; }
    const Array2D& uy_array() const { return uy_; }

    /// Zero every boundary (normal) face.
    void zero_boundary();
    /// True when every boundary face is exactly zero.
    bool boundary_is_zero() const;
    double max_abs() const;

    friend bool operator==(const VectorField&, const VectorField&) = default;

private:
    GridSpec grid_;
    Array2D ux_;
    Array2D uy_;
};

/// The two raw integrals entering the viscous dissipation.
struct TensorFieldNorms {
    double grad_norm_sq = 0.0;
    double div_norm_sq = 0.0;
};

/// Staggered velocity gradient. The diagonal entries live at cell centers,
/// the off-diagonal ones at cell corners (nodes); wall nodes use the
/// reflected ghost and carry half a control volume.
struct VelocityGradient {
    GridSpec grid;
    Array2D dux_dx;  // nx x ny, cells
    Array2D duy_dy;  // nx x ny, cells
    Array2D dux_dy;  // (nx+1) x (ny+1), nodes
    Array2D duy_dx;  // (nx+1) x (ny+1), nodes
};

// Discrete operators -------------------------------------------------------

ScalarField divergence(const VectorField& w);

/// Centered differences on interior faces, zero on boundary faces. With
/// divergence() this gives <div w, phi> = -<w, grad phi> for every w with
/// zero boundary faces.
VectorField gradient(const ScalarField& phi);

/// Midpoint rule: dx*dy*sum.
double integrate(const ScalarField& phi);

/// Cell-weighted inner product dx*dy*sum(a*b).
double inner(const ScalarField& a, const ScalarField& b);
/// Face-weighted inner product dx*dy*sum over all faces of both components.
double inner(const VectorField& a, const VectorField& b);

double l2_norm(const ScalarField& a);
double l2_norm(const VectorField& a);

/// Componentwise 5-point Laplacian on interior faces with homogeneous wall
/// conditions (boundary faces are zero, tangential walls reflected).
/// Boundary faces of the result are zero. Satisfies
/// -<v, laplacian(w)> = contract(velocity_gradient(v), velocity_gradient(w))
/// for no-slip v, w.
VectorField laplacian(const VectorField& w);

VelocityGradient velocity_gradient(const VectorField& u);

/// Discrete integral of grad(a) : grad(b) with the staggered weights.
double contract(const VelocityGradient& a, const VelocityGradient& b);

TensorFieldNorms velocity_norms(const VectorField& u);

/// Throws ShapeError when the two grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace isodecay
