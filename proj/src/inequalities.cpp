#include "ksf/inequalities.hpp"

#include "ksf/spectral.hpp"

#include <cmath>
#include <random>

namespace ksf {

std::pair<double, double> young_bound(double a, double b, double eps, double p) {
    if (!(a >= 0.0) || !(b >= 0.0)) throw std::invalid_argument("young_bound: a, b must be >= 0");
    if (!(eps > 0.0)) throw std::invalid_argument("young_bound: eps must be > 0");
    if (!(p > 1.0)) throw std::invalid_argument("young_bound: p must be > 1");
    double q = p / (p - 1.0);
    double c = std::pow(eps * p, -q / p) / q;
    return {a * b, eps * std::pow(a, p) + c * std::pow(b, q)};
}

double malpha_bound(double c1, double c2, double beta) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw std::invalid_argument("malpha_bound: C1, C2 must be > 0");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("malpha_bound: beta must be in (0,1)");
    double p = 1.0 / beta;
    double cpq = (p - 1.0) / std::pow(p, p / (p - 1.0));
    return 2.0 * c1 + 2.0 * c2 * cpq * std::pow(2.0 * c2, beta / (1.0 - beta));
}

namespace {

ScalarField realize(const FieldSampler& s, const Grid2D& g, std::uint64_t index, bool zero_mean) {
    if (s.max_mode < 1) throw std::invalid_argument("FieldSampler: max_mode must be >= 1");
    int m = std::min(s.max_mode, std::min(g.nx, g.ny) / 4);
    std::mt19937_64 rng(s.seed * 0x9e3779b97f4a7c15ull + index + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralCoeffs c{g, std::vector<double>(g.size(), 0.0)};
    for (int k = 0; k <= m; ++k) {
        for (int j = 0; j <= m; ++j) {
            double a = gauss(rng) / std::pow(1.0 + j * j + k * k, 0.5 * s.decay_exponent);
            c(j, k) = a;
        }
    }
    if (zero_mean) c(0, 0) = 0.0;
    ScalarField f = inverse_cosine_transform(c);
    double sup = std::max(std::abs(f.min()), std::abs(f.max()));
    if (sup > 0.0) {
        // Random target amplitude within the cap keeps scales diverse.
        std::uniform_real_distribution<double> unif(0.2, 1.0);
        double scale = s.amplitude_cap * unif(rng) / sup;
        for (double& v : f.values) v *= scale;
    }
    return f;
}

}  // namespace

ScalarField FieldSampler::sample(const Grid2D& g, std::uint64_t index) const {
    return realize(*this, g, index, false);
}

ScalarField FieldSampler::sample_zero_mean(const Grid2D& g, std::uint64_t index) const {
    return realize(*this, g, index, true);
}

double exp_integral(const ScalarField& v) {
    ScalarField e(v.grid);
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        double a = std::abs(v.values[k]);
        if (a > 700.0) throw std::overflow_error("exp_integral: e^{|v|} overflows float64");
        e.values[k] = std::exp(a);
    }
    return integrate(e);
}

double vlogv_l1(const ScalarField& v) {
    ScalarField e(v.grid);
    for (std::size_t k = 0; k < e.values.size(); ++k) {
        double a = v.values[k];
        e.values[k] = a != 0.0 ? std::abs(a * std::log(std::abs(a))) : 0.0;
    }
    return integrate(e);
}

double trudinger_moser_ratio(const ScalarField& v) {
    double grad2 = w1p_seminorm(v, 2.0);
    double exponent = grad2 * grad2 / (8.0 * M_PI) + lp_norm(v, 1.0) / v.grid.area();
    return exp_integral(v) / std::exp(exponent);
}

InequalityReport trudinger_moser_check(const FieldSampler& sampler, const Grid2D& g, int count) {
    InequalityReport report;
    report.name = "trudinger_moser";
    for (int i = 0; i < count; ++i) {
        ScalarField v = sampler.sample(g, static_cast<std::uint64_t>(i));
        double ratio;
        try {
            ratio = trudinger_moser_ratio(v);
        } catch (const std::overflow_error&) {
            continue;  // rejected sample; the amplitude cap makes this rare
        }
        ++report.samples;
        if (ratio > report.worst_ratio) {
            report.worst_ratio = ratio;
            report.witness = "sample " + std::to_string(i);
        }
    }
    return report;
}

double biler_fitted_c(const ScalarField& v, double p, double eps) {
    double grad2 = w1p_seminorm(v, 2.0);
    double vlog = vlogv_l1(v);
    double l1 = lp_norm(v, 1.0);
    double bracket = vlog + std::pow(l1, 1.0 / p) + l1;
    if (bracket == 0.0) return -1.0;  // degenerate sample, caller skips
    double lhs = lp_norm(v, p);
    double first = eps * std::pow(grad2, 1.0 - 1.0 / p) * std::pow(vlog, 1.0 / p);
    return std::max(0.0, lhs - first) / bracket;
}

InequalityReport biler_check(const FieldSampler& sampler, const Grid2D& g, double p, double eps,
                             int count) {
    if (!(p >= 2.0)) throw std::invalid_argument("biler_check: p must be >= 2");
    if (!(eps > 0.0)) throw std::invalid_argument("biler_check: eps must be > 0");
    InequalityReport report;
    report.name = "biler_p" + std::to_string(p) + "_eps" + std::to_string(eps);
    for (int i = 0; i < count; ++i) {
        ScalarField v = sampler.sample(g, static_cast<std::uint64_t>(i));
        double c = biler_fitted_c(v, p, eps);
        if (c < 0.0) continue;
        ++report.samples;
        if (c > report.worst_ratio) {
            report.worst_ratio = c;
            report.witness = "sample " + std::to_string(i);
        }
    }
    return report;
}

}  // namespace ksf
