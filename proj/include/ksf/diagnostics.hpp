// Scalar observables along a trajectory: mass, the exact ||v||_1 law, the
// energy functional W and its dissipation, decay-estimate fits, bound ledger.
#pragma once

#include "ksf/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ksf {

struct ForcingSpec;
struct State;
struct Trajectory;

struct DiagnosticsRecord {
    double t = 0.0;
    double mass_u = 0.0;
    double v_l1 = 0.0;
    double v_l1_exact = 0.0;
    double u_linf = 0.0;
    double u_l2 = 0.0;
    double v_w1theta = 0.0;
    double energy_w = 0.0;
    double dissipation = 0.0;
    double energy_residual = 0.0;
    double fv_integral = 0.0;
    double ulogu_l1 = 0.0;
    double vt_l2_accum = 0.0;
};

struct DecayCheckParams {
    double theta;
    double delta0;   // in (0,1)
    double r;        // > 1
    int n;           // >= 2
    double epsilon;  // > 0 smallness level of the data

    DecayCheckParams(double theta_, double delta0_, double r_, int n_, double eps_);
};

// W(u,v) = integral [u log u - u v + (|grad v|^2 + v^2)/2 - f v], 0 log 0 := 0.
double energy_w(const ScalarField& u, const ScalarField& v, const ScalarField& f);

// integral u |grad(log u - v)|^2 + tau * integral ((v - v_prev)/dt)^2,
// first integrand in the |grad u/sqrt(u) - sqrt(u) grad v|^2 form.
double dissipation(const ScalarField& u, const ScalarField& v, const ScalarField& v_prev, double dt,
                   double tau);

// Closed-form ||v(t)||_1; the forcing integral is analytic for constant-in-time
// f and quadrature-evaluated otherwise.
double v_l1_exact(double t, double v0_l1, double u0_l1, const ForcingSpec& f, double tau);

// integral_0^1 of ||u log u|| helpers
double ulogu_l1(const ScalarField& u);

struct DecayFit {
    double fitted_c = 0.0;  // least C covering every sampled t > 1
    double sup_residual = 0.0;
};

// g(t) = ||u(t) - e^{tL}u0||_inf over snapshots with t > 1, fitted against
// C eps^2 e^{-lambda1 t/r} + C eps^2.
DecayFit decay_check_u(const Trajectory& traj, const DecayCheckParams& params);

// As above for grad of v minus its linear comparison flow, in L^theta, fitted
// against C eps^2 e^{-lambda1 t/r} + C eps. The double-semigroup integral is
// evaluated in closed form per mode.
DecayFit decay_check_v(const Trajectory& traj, const DecayCheckParams& params, double tau);

struct LedgerEntry {
    std::string name;
    double global_max = 0.0;
    double halfway_max = 0.0;  // running max at t_end/2
    bool plateau_ok = false;
};

struct LedgerReport {
    std::vector<LedgerEntry> entries;
    bool all_plateaued = true;
};

// Running maxima of the paper-bounded observables plus the accumulated
// ||v_t||_2^2 budget; an entry plateaus when the global running max stays
// within 5% of its value at t_end/2.
LedgerReport bounds_ledger(const Trajectory& traj);

}  // namespace ksf
