#include "ksf/operators.hpp"

namespace ksf {

ScalarField laplacian_neumann(const ScalarField& field) {
    const Grid2D& g = field.grid;
    ScalarField out(g);
    const double ix2 = 1.0 / (g.dx * g.dx);
    const double iy2 = 1.0 / (g.dy * g.dy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double c = field(i, j);
            double e = (i < g.nx - 1) ? field(i + 1, j) - c : 0.0;
            double w = (i > 0) ? field(i - 1, j) - c : 0.0;
            double n = (j < g.ny - 1) ? field(i, j + 1) - c : 0.0;
            double s = (j > 0) ? field(i, j - 1) - c : 0.0;
            out(i, j) = (e + w) * ix2 + (n + s) * iy2;
        }
    }
    return out;
}

FluxPair chemotactic_flux(const ScalarField& u, const ScalarField& v) {
    check_same_grid(u.grid, v.grid, "chemotactic_flux");
    const Grid2D& g = u.grid;
    FluxPair flux(g);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 1; i < g.nx; ++i) {  // interior x-faces between i-1 and i
            double vel = (v(i, j) - v(i - 1, j)) / g.dx;
            double donor = vel > 0.0 ? u(i - 1, j) : u(i, j);
            flux.x(i, j) = donor * vel;
        }
    }
    for (int j = 1; j < g.ny; ++j) {  // interior y-faces between j-1 and j
        for (int i = 0; i < g.nx; ++i) {
            double vel = (v(i, j) - v(i, j - 1)) / g.dy;
            double donor = vel > 0.0 ? u(i, j - 1) : u(i, j);
            flux.y(i, j) = donor * vel;
        }
    }
    return flux;
}

ScalarField flux_divergence(const FluxPair& flux) {
    const Grid2D& g = flux.grid;
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            out(i, j) = (flux.x(i + 1, j) - flux.x(i, j)) / g.dx +
                        (flux.y(i, j + 1) - flux.y(i, j)) / g.dy;
    return out;
}

}  // namespace ksf
