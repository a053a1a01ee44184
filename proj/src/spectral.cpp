#include "ksf/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace ksf {

namespace {

// One pair of r2r plans per grid size. The FFTW planner is not thread-safe;
// plan creation is serialized, execution uses the new-array interface.
struct PlanPair {
    fftw_plan fwd = nullptr;  // REDFT10 (DCT-II) in both dimensions
    fftw_plan inv = nullptr;  // REDFT01 (DCT-III) in both dimensions

    PlanPair(int nx, int ny) {
        std::vector<double> buf(static_cast<std::size_t>(nx) * ny);
        fwd = fftw_plan_r2r_2d(ny, nx, buf.data(), buf.data(), FFTW_REDFT10, FFTW_REDFT10,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
        inv = fftw_plan_r2r_2d(ny, nx, buf.data(), buf.data(), FFTW_REDFT01, FFTW_REDFT01,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~PlanPair() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
};

PlanPair& plans_for(int nx, int ny) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{nx, ny}];
    if (!slot) slot = std::make_unique<PlanPair>(nx, ny);
    return *slot;
}

}  // namespace

double eigenvalue(const Grid2D& g, int j, int k) {
    double mx = 2.0 / (g.dx * g.dx) * (1.0 - std::cos(M_PI * j / g.nx));
    double my = 2.0 / (g.dy * g.dy) * (1.0 - std::cos(M_PI * k / g.ny));
    return mx + my;
}

double lambda1(const Grid2D& g) {
    return std::min(eigenvalue(g, 1, 0), eigenvalue(g, 0, 1));
}

SpectralCoeffs cosine_transform(const ScalarField& field) {
    if (!field.finite()) throw std::domain_error("cosine_transform: non-finite field");
    const Grid2D& g = field.grid;
    SpectralCoeffs out{g, field.values};
    fftw_execute_r2r(plans_for(g.nx, g.ny).fwd, out.coeffs.data(), out.coeffs.data());
    const double scale = 1.0 / (4.0 * g.nx * g.ny);
    for (double& c : out.coeffs) c *= scale;
    return out;
}

ScalarField inverse_cosine_transform(const SpectralCoeffs& coeffs) {
    const Grid2D& g = coeffs.grid;
    ScalarField out(g);
    out.values = coeffs.coeffs;
    fftw_execute_r2r(plans_for(g.nx, g.ny).inv, out.values.data(), out.values.data());
    return out;
}

double parseval_weight(const Grid2D& g, int j, int k) {
    double wj = (j == 0) ? 1.0 : 2.0;
    double wk = (k == 0) ? 1.0 : 2.0;
    // Per-dimension DCT-II orthogonality combined with the cell-area quadrature
    // weight; coefficients here carry the 1/(4 nx ny) normalization already.
    return g.area() * wj * wk;
}

ScalarField heat_semigroup(const ScalarField& field, double t) {
    if (t < 0.0) throw std::invalid_argument("heat_semigroup: t must be >= 0");
    if (t == 0.0) return field;
    const Grid2D& g = field.grid;
    SpectralCoeffs c = cosine_transform(field);
    for (int k = 0; k < g.ny; ++k)
        for (int j = 0; j < g.nx; ++j) c(j, k) *= std::exp(-eigenvalue(g, j, k) * t);
    return inverse_cosine_transform(c);
}

ScalarField resolvent_solve(const ScalarField& rhs, double a, double b) {
    if (a < 0.0 || 1.0 + b <= 0.0) throw std::invalid_argument("resolvent_solve: bad coefficients");
    const Grid2D& g = rhs.grid;
    SpectralCoeffs c = cosine_transform(rhs);
    for (int k = 0; k < g.ny; ++k)
        for (int j = 0; j < g.nx; ++j) c(j, k) /= 1.0 + a * eigenvalue(g, j, k) + b;
    return inverse_cosine_transform(c);
}

ScalarField eigenmode(const Grid2D& g, int j, int k) {
    return sample(g, [&](double x, double y) {
        return std::cos(j * M_PI * x / g.lx) * std::cos(k * M_PI * y / g.ly);
    });
}

}  // namespace ksf
