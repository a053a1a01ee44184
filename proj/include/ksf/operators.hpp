// Discrete spatial operators: Neumann Laplacian and the conservative
// chemotactic flux div(u grad v) on face-centered fluxes.
#pragma once

#include "ksf/grid.hpp"

namespace ksf {

// Face-centered fluxes. fx has (nx+1)*ny entries (x-faces, index j*(nx+1)+i),
// fy has nx*(ny+1) entries (y-faces, index j*nx+i). Boundary faces are zero.
struct FluxPair {
    Grid2D grid;
    std::vector<double> fx;
    std::vector<double> fy;

    FluxPair() = default;
    explicit FluxPair(const Grid2D& g)
        : grid(g),
          fx(static_cast<std::size_t>(g.nx + 1) * g.ny, 0.0),
          fy(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0) {}

    double& x(int i, int j) { return fx[static_cast<std::size_t>(j) * (grid.nx + 1) + i]; }
    double x(int i, int j) const { return fx[static_cast<std::size_t>(j) * (grid.nx + 1) + i]; }
    double& y(int i, int j) { return fy[static_cast<std::size_t>(j) * grid.nx + i]; }
    double y(int i, int j) const { return fy[static_cast<std::size_t>(j) * grid.nx + i]; }
};

// 5-point stencil with reflected ghost cells; integrate(result) = 0 to roundoff.
ScalarField laplacian_neumann(const ScalarField& field);

// Face flux = (donor-cell u at the face) * (central difference of v across the face).
FluxPair chemotactic_flux(const ScalarField& u, const ScalarField& v);

// Telescoping divergence of a face flux field.
ScalarField flux_divergence(const FluxPair& flux);

}  // namespace ksf
