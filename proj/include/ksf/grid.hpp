// Uniform cell-centered rectangular mesh and scalar fields on it.
#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksf {

struct Grid2D {
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    double dx = 0.0, dy = 0.0;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
        if (nx < 4 || ny < 4) throw std::invalid_argument("Grid2D: nx and ny must be >= 4");
        if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("Grid2D: lx and ly must be > 0");
        dx = lx / nx;
        dy = ly / ny;
    }

    // cell centers
    double x(int i) const { return (i + 0.5) * dx; }
    double y(int j) const { return (j + 0.5) * dy; }

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    double cell_area() const { return dx * dy; }
    double area() const { return lx * ly; }

    bool operator==(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
};

// Cell-centered values, row-major: index (i,j) -> j*nx + i (x fastest).
struct ScalarField {
    Grid2D grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid2D& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

    double& operator()(int i, int j) { return values[static_cast<std::size_t>(j) * grid.nx + i]; }
    double operator()(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.nx + i]; }

    bool finite() const;
    double min() const;
    double max() const;
};

// Sample a function of (x, y) at cell centers.
template <class F>
ScalarField sample(const Grid2D& g, F&& f) {
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out(i, j) = f(g.x(i), g.y(j));
    return out;
}

void check_same_grid(const Grid2D& a, const Grid2D& b, const char* where);

// Midpoint quadrature of the field over the domain. Throws on non-finite entries.
double integrate(const ScalarField& field);

constexpr double kInfinityOrder = -1.0;  // sentinel accepted by lp_norm for p = inf

// Discrete L^p norm; p = std::numeric_limits<double>::infinity() (or kInfinityOrder) for sup norm.
double lp_norm(const ScalarField& field, double p);

// Cell-centered gradient components, face differences averaged with Neumann reflection
// (boundary face difference is zero).
void gradient(const ScalarField& field, ScalarField& gx, ScalarField& gy);

// L^p norm of the cell-centered gradient magnitude.
double w1p_seminorm(const ScalarField& field, double p);

// W^{1,theta} norm of v assembled as (||v||_theta^theta + ||grad v||_theta^theta)^(1/theta).
double w1theta_norm(const ScalarField& field, double theta);

// Binary snapshot format: "KSF1", nx, ny (u64 LE), lx, ly (f64 LE), then nx*ny f64 row-major.
void write_snapshot(const ScalarField& field, const std::string& path);
ScalarField read_snapshot(const std::string& path);

}  // namespace ksf
