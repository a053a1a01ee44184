// Executable checks of the standalone inequality lemmas: Young with explicit
// constant, the implicit-bound lemma, Trudinger-Moser, Biler interpolation.
#pragma once

#include "ksf/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ksf {

struct InequalityReport {
    std::string name;
    int samples = 0;
    double worst_ratio = 0.0;  // fitted constant when the lemma's C is free
    bool violated = false;     // only meaningful for fully explicit constants
    std::optional<std::string> witness;
};

// ab <= eps a^p + C(eps,p,q) b^q with C = (eps p)^{-q/p} q^{-1}, q = p/(p-1).
// Returns (lhs, rhs).
std::pair<double, double> young_bound(double a, double b, double eps, double p);

// Explicit bound M0 = 2 C1 + 2 C2 C(p,q) (2 C2)^{beta/(1-beta)}, p = 1/beta,
// dominating every M with M <= C1 + C2 M^beta.
double malpha_bound(double c1, double c2, double beta);

// Band-limited random fields: cosine coefficients with power-law spectral
// decay, realized exactly at cell centers of any grid (modes are shared across
// resolutions so refinement audits compare the same continuum function).
struct FieldSampler {
    int max_mode = 16;            // inclusive cap per direction
    double decay_exponent = 1.5;  // coefficient decay (1+j^2+k^2)^{-e/2}
    double amplitude_cap = 8.0;   // targeted sup-norm of the samples
    std::uint64_t seed = 1;

    ScalarField sample(const Grid2D& g, std::uint64_t index) const;
    // Zero-mean variant (the (0,0) coefficient dropped).
    ScalarField sample_zero_mean(const Grid2D& g, std::uint64_t index) const;
};

// Fitted C in  int e^{|v|} <= C exp(||grad v||_2^2/(8 pi) + ||v||_1/|Omega|).
InequalityReport trudinger_moser_check(const FieldSampler& sampler, const Grid2D& g, int count);

// Fitted C in the interpolation inequality
//   ||v||_p <= eps ||grad v||_2^{1-1/p} ||v log|v|||_1^{1/p} + C(...bracket...).
InequalityReport biler_check(const FieldSampler& sampler, const Grid2D& g, double p, double eps,
                             int count);

// Evaluation helpers shared with the CLI reports.
double exp_integral(const ScalarField& v);          // int e^{|v|}
double vlogv_l1(const ScalarField& v);              // || v log|v| ||_1, 0 log 0 := 0
double trudinger_moser_ratio(const ScalarField& v);
double biler_fitted_c(const ScalarField& v, double p, double eps);

}  // namespace ksf
