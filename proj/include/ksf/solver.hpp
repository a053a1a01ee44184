// IMEX time integration of the forced Keller-Segel system: implicit
// diffusion/decay in the cosine basis, explicit upwind chemotaxis, blow-up
// detection via the extensibility alternative.
#pragma once

#include "ksf/diagnostics.hpp"
#include "ksf/grid.hpp"

#include <functional>
#include <vector>

namespace ksf {

struct State {
    ScalarField u;  // cell density, >= 0
    ScalarField v;  // chemical concentration, >= 0
    double t = 0.0;
};

enum class ForcingMode { Zero, ConstantInTime, TimeDependent };
enum class Modulation { Identity, ExponentialDecay, Sinusoidal };

struct ForcingSpec {
    ForcingMode mode = ForcingMode::Zero;
    ScalarField base;  // nonnegative spatial profile
    Modulation modulation = Modulation::Identity;
    double rate = 0.0;       // exponential-decay rate
    double amplitude = 0.0;  // sinusoidal amplitude, in [0,1)
    double period = 1.0;     // sinusoidal period

    static ForcingSpec zero();
    static ForcingSpec constant(const ScalarField& base);
    static ForcingSpec exp_decay(const ScalarField& base, double rate);
    static ForcingSpec sinusoidal(const ScalarField& base, double amplitude, double period);

    bool is_constant_in_time() const { return mode != ForcingMode::TimeDependent; }
    double modulation_at(double t) const;
    // f(x, t) sampled at cell centers; the zero mode returns a zero field on `g`.
    ScalarField sample(const Grid2D& g, double t) const;
    double l1_at(const Grid2D& g, double t) const;
};

struct SolverConfig {
    double tau = 1.0;
    double dt_init = 1e-3;
    double dt_min = 1e-10;
    double cfl_safety = 0.5;
    double t_end = 1.0;
    double blowup_sup_threshold = 1e9;
    double snapshot_interval = 0.1;
    double theta = 3.0;        // W^{1,theta} component of the blow-up functional
    bool chemotaxis = true;    // explicit u grad v transport on/off
    bool adaptive = true;      // CFL-adaptive dt (otherwise fixed dt_init)

    void validate() const;
};

enum class RunStatus { Completed, Blowup };

struct Trajectory {
    std::vector<State> snapshots;  // uniform spacing snapshot_interval (plus t = 0)
    std::vector<DiagnosticsRecord> records;
    RunStatus status = RunStatus::Completed;
    double t_detect = 0.0;     // detection time when status == Blowup
    bool nan_warning = false;  // NaN appeared before the threshold crossing
    double u0_l1 = 0.0;
    double v0_l1 = 0.0;
};

// One IMEX step: explicit upwind chemotaxis on u, implicit diffusion for u,
// then implicit (Delta - I) relaxation for v driven by u_new + f(t).
State step(const State& state, const SolverConfig& cfg, const ForcingSpec& f, double dt);

struct DtChoice {
    double dt = 0.0;
    bool underflow = false;  // advective CFL bound fell below dt_min
};

// Advective CFL dt = cfl_safety * min(dx,dy) / max |grad v| clamped to
// [dt_min, dt_init].
DtChoice adaptive_dt(const State& state, const SolverConfig& cfg);

// True iff ||u||_inf + ||v||_{W^{1,theta}} exceeds the threshold.
bool detect_blowup(const State& state, double theta, const SolverConfig& cfg);

// Advance to t_end or until blow-up; emits snapshots and per-step diagnostics.
Trajectory run(const State& initial, const SolverConfig& cfg, const ForcingSpec& f);

}  // namespace ksf
