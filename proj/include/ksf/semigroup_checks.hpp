// Empirical checks of the semigroup machinery: the convolution-integral
// bound, the gradient smoothing estimate, and the mild-solution residual.
#pragma once

#include "ksf/grid.hpp"
#include "ksf/solver.hpp"

#include <vector>

namespace ksf {

struct SemigroupParams {
    double alpha;  // < 1
    double beta;   // < 1
    double gamma;  // > 0
    double delta;  // > 0, != gamma

    SemigroupParams(double a, double b, double g, double d) : alpha(a), beta(b), gamma(g), delta(d) {
        if (!(alpha < 1.0) || !(beta < 1.0))
            throw std::invalid_argument("SemigroupParams: alpha and beta must be < 1");
        if (!(gamma > 0.0) || !(delta > 0.0) || gamma == delta)
            throw std::invalid_argument("SemigroupParams: need gamma, delta > 0 and gamma != delta");
    }
};

// LHS(t) = integral_0^t (1+(t-s)^{-alpha}) e^{-gamma(t-s)} (1+s^{-beta}) e^{-delta s} ds,
// evaluated by adaptive quadrature with endpoint substitutions. A zero exponent
// drops its (1 + x^{-a}) factor to the plain exponential. Returns the supremum
// over t_grid of LHS(t) / [(1+t^{min{0,1-alpha-beta}}) e^{-min{gamma,delta} t}].
double convolution_bound_check(const SemigroupParams& p, const std::vector<double>& t_grid);

// One evaluation of the left side (exposed for the closed-form oracle tests).
double convolution_integral(const SemigroupParams& p, double t);

// sup over t_grid of ||grad e^{tL} w||_theta / [(1+t^{-1/2-(1/q-1/theta)}) e^{-lambda1 t} ||w||_q].
double smoothing_estimate_check(const ScalarField& w, double q, double theta,
                                const std::vector<double>& t_grid);

// Residual of the variation-of-constants (Duhamel) representation over a stored
// trajectory with uniformly spaced snapshots. Returns
//   (||u(T) - Phi1(T)||_inf, ||v(T) - Phi2(T)||_{W^{1,theta}}),
// with the time integrals evaluated by trapezoidal quadrature.
std::pair<double, double> mild_residual(const std::vector<State>& trajectory, double tau,
                                        const ForcingSpec& f, double theta = 3.0);

}  // namespace ksf
