#include "ksf/semigroup_checks.hpp"

#include "ksf/operators.hpp"
#include "ksf/quadrature.hpp"
#include "ksf/spectral.hpp"

#include <cmath>

namespace ksf {

namespace {

// (1 + x^{-a}) with the a = 0 convention dropping the singular part entirely.
double kernel_factor(double x, double a) {
    return a == 0.0 ? 1.0 : 1.0 + std::pow(x, -a);
}

}  // namespace

double convolution_integral(const SemigroupParams& p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("convolution_integral: t must be > 0");
    // The substituted variable is passed through directly: recomputing t - s
    // from a rounded s cancels catastrophically near the endpoints.
    auto integrand = [&](double ts, double s) {
        return kernel_factor(ts, p.alpha) * std::exp(-p.gamma * ts) *
               kernel_factor(s, p.beta) * std::exp(-p.delta * s);
    };
    // Substitute s = sigma^m (resp. t - s = sigma^m) so the endpoint
    // singularities x^{-a}, 0 < a < 1, become smooth; m(1-a) >= 2 suffices.
    auto power_for = [](double a) {
        if (a <= 0.0) return 1;
        return std::max(2, static_cast<int>(std::ceil(2.0 / (1.0 - a))));
    };
    const double half = 0.5 * t;
    const double tol = 1e-12 * std::max(1.0, half);

    int mb = power_for(p.beta);
    double left = adaptive_simpson(
        [&](double sig) {
            double s = std::pow(sig, mb);
            // Jacobian kills the integrable singularity (also guards underflow).
            if (p.beta > 0.0 && s == 0.0) return 0.0;
            return integrand(t - s, s) * mb * std::pow(sig, mb - 1);
        },
        0.0, std::pow(half, 1.0 / mb), tol);

    int ma = power_for(p.alpha);
    double right = adaptive_simpson(
        [&](double sig) {
            double ts = std::pow(sig, ma);
            if (p.alpha > 0.0 && ts == 0.0) return 0.0;
            return integrand(ts, t - ts) * ma * std::pow(sig, ma - 1);
        },
        0.0, std::pow(half, 1.0 / ma), tol);
    return left + right;
}

double convolution_bound_check(const SemigroupParams& p, const std::vector<double>& t_grid) {
    double worst = 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0)) throw std::invalid_argument("convolution_bound_check: t_grid must be positive");
        double lhs = convolution_integral(p, t);
        if (!std::isfinite(lhs))
            throw std::runtime_error("convolution_bound_check: quadrature did not converge");
        double expo = std::min(0.0, 1.0 - p.alpha - p.beta);
        double envelope = (1.0 + std::pow(t, expo)) * std::exp(-std::min(p.gamma, p.delta) * t);
        worst = std::max(worst, lhs / envelope);
    }
    return worst;
}

double smoothing_estimate_check(const ScalarField& w, double q, double theta,
                                const std::vector<double>& t_grid) {
    if (!(q >= 1.0) || !(theta >= q))
        throw std::invalid_argument("smoothing_estimate_check: need 1 <= q <= theta");
    double wq = lp_norm(w, q);
    if (wq == 0.0) return 0.0;
    double l1 = lambda1(w.grid);
    double expo = -0.5 - (1.0 / q - 1.0 / theta);  // n = 2 in the smoothing exponent
    double worst = 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0))
            throw std::invalid_argument("smoothing_estimate_check: t_grid must be positive");
        double num = w1p_seminorm(heat_semigroup(w, t), theta);
        double denom = (1.0 + std::pow(t, expo)) * std::exp(-l1 * t) * wq;
        worst = std::max(worst, num / denom);
    }
    return worst;
}

std::pair<double, double> mild_residual(const std::vector<State>& trajectory, double tau,
                                        const ForcingSpec& f, double theta) {
    if (trajectory.size() < 3)
        throw std::invalid_argument("mild_residual: need at least 3 snapshots");
    const Grid2D& g = trajectory.front().u.grid;
    const double t0 = trajectory.front().t;
    const double T = trajectory.back().t - t0;
    const std::size_t n = trajectory.size();
    const double dt_snap = T / static_cast<double>(n - 1);

    // Phi1 = e^{T L} u0 - int_0^T e^{(T-s)L} div(u grad v)(s) ds
    ScalarField phi1 = heat_semigroup(trajectory.front().u, T);
    // Phi2 = e^{(T/tau)(L-1)} v0 + (1/tau) int_0^T e^{((T-s)/tau)(L-1)} (u + f)(s) ds
    ScalarField phi2 = heat_semigroup(trajectory.front().v, T / tau);
    for (double& v : phi2.values) v *= std::exp(-T / tau);

    for (std::size_t k = 0; k < n; ++k) {
        const State& s = trajectory[k];
        double weight = (k == 0 || k == n - 1) ? 0.5 * dt_snap : dt_snap;
        double rem = T - (s.t - t0);

        ScalarField div = flux_divergence(chemotactic_flux(s.u, s.v));
        ScalarField prop = heat_semigroup(div, rem);
        for (std::size_t i = 0; i < phi1.values.size(); ++i)
            phi1.values[i] -= weight * prop.values[i];

        ScalarField drive = f.sample(g, s.t);
        for (std::size_t i = 0; i < drive.values.size(); ++i) drive.values[i] += s.u.values[i];
        ScalarField prop2 = heat_semigroup(drive, rem / tau);
        double damp = std::exp(-rem / tau) / tau;
        for (std::size_t i = 0; i < phi2.values.size(); ++i)
            phi2.values[i] += weight * damp * prop2.values[i];
    }

    ScalarField du = trajectory.back().u;
    for (std::size_t i = 0; i < du.values.size(); ++i) du.values[i] -= phi1.values[i];
    ScalarField dv = trajectory.back().v;
    for (std::size_t i = 0; i < dv.values.size(); ++i) dv.values[i] -= phi2.values[i];
    return {lp_norm(du, kInfinityOrder), w1theta_norm(dv, theta)};
}

}  // namespace ksf
