// Cosine eigenbasis of the discrete Neumann Laplacian: transforms, exact
// heat semigroup, first nonzero eigenvalue.
#pragma once

#include "ksf/grid.hpp"

namespace ksf {

// Coefficients c_{jk} of the cosine basis, normalized so the inverse transform
// reconstructs the field exactly (up to roundoff). Stored row-major like fields.
struct SpectralCoeffs {
    Grid2D grid;
    std::vector<double> coeffs;

    double& operator()(int j, int k) { return coeffs[static_cast<std::size_t>(k) * grid.nx + j]; }
    double operator()(int j, int k) const { return coeffs[static_cast<std::size_t>(k) * grid.nx + j]; }
};

// Discrete eigenvalue of -Laplacian for mode (j,k):
//   mu_jk = (2/dx^2)(1 - cos(pi j/nx)) + (2/dy^2)(1 - cos(pi k/ny)).
double eigenvalue(const Grid2D& g, int j, int k);

// Smallest nonzero discrete eigenvalue.
double lambda1(const Grid2D& g);

SpectralCoeffs cosine_transform(const ScalarField& field);
ScalarField inverse_cosine_transform(const SpectralCoeffs& coeffs);

// Quadrature-weighted Parseval weight of mode (j,k): ||f||_2^2 = sum w_jk c_jk^2.
double parseval_weight(const Grid2D& g, int j, int k);

// e^{t Laplacian} with Neumann boundary, exact in the discrete eigenbasis.
ScalarField heat_semigroup(const ScalarField& field, double t);

// Solve (I - a*Laplacian + b*I) x = rhs in the eigenbasis: divide mode (j,k) by
// (1 + a*mu_jk + b). Requires a >= 0 and 1 + b > 0.
ScalarField resolvent_solve(const ScalarField& rhs, double a, double b);

// Cell-centered sample of cos(j pi x/lx) cos(k pi y/ly), an exact eigenvector
// of the discrete stencil.
ScalarField eigenmode(const Grid2D& g, int j, int k);

}  // namespace ksf
