#include "ksf/solver.hpp"

#include "ksf/operators.hpp"
#include "ksf/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace ksf {

ForcingSpec ForcingSpec::zero() { return ForcingSpec{}; }

ForcingSpec ForcingSpec::constant(const ScalarField& base) {
    if (base.min() < 0.0) throw std::invalid_argument("ForcingSpec: base must be nonnegative");
    ForcingSpec f;
    f.mode = ForcingMode::ConstantInTime;
    f.base = base;
    return f;
}

ForcingSpec ForcingSpec::exp_decay(const ScalarField& base, double rate) {
    if (base.min() < 0.0) throw std::invalid_argument("ForcingSpec: base must be nonnegative");
    if (rate < 0.0) throw std::invalid_argument("ForcingSpec: decay rate must be >= 0");
    ForcingSpec f;
    f.mode = ForcingMode::TimeDependent;
    f.base = base;
    f.modulation = Modulation::ExponentialDecay;
    f.rate = rate;
    return f;
}

ForcingSpec ForcingSpec::sinusoidal(const ScalarField& base, double amplitude, double period) {
    if (base.min() < 0.0) throw std::invalid_argument("ForcingSpec: base must be nonnegative");
    if (!(amplitude >= 0.0 && amplitude < 1.0))
        throw std::invalid_argument("ForcingSpec: sinusoidal amplitude must be in [0,1)");
    if (!(period > 0.0)) throw std::invalid_argument("ForcingSpec: period must be > 0");
    ForcingSpec f;
    f.mode = ForcingMode::TimeDependent;
    f.base = base;
    f.modulation = Modulation::Sinusoidal;
    f.amplitude = amplitude;
    f.period = period;
    return f;
}

double ForcingSpec::modulation_at(double t) const {
    switch (modulation) {
        case Modulation::Identity: return 1.0;
        case Modulation::ExponentialDecay: return std::exp(-rate * t);
        case Modulation::Sinusoidal: return 1.0 + amplitude * std::sin(2.0 * M_PI * t / period);
    }
    return 1.0;
}

ScalarField ForcingSpec::sample(const Grid2D& g, double t) const {
    if (mode == ForcingMode::Zero) return ScalarField(g, 0.0);
    check_same_grid(base.grid, g, "ForcingSpec::sample");
    ScalarField out = base;
    double m = (mode == ForcingMode::TimeDependent) ? modulation_at(t) : 1.0;
    if (m != 1.0)
        for (double& v : out.values) v *= m;
    return out;
}

double ForcingSpec::l1_at(const Grid2D& g, double t) const {
    (void)g;
    if (mode == ForcingMode::Zero) return 0.0;
    double m = (mode == ForcingMode::TimeDependent) ? modulation_at(t) : 1.0;
    return m * integrate(base);  // base is nonnegative
}

void SolverConfig::validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("SolverConfig: tau must be > 0");
    if (!(dt_init > 0.0) || !(dt_min > 0.0) || !(dt_min < dt_init))
        throw std::invalid_argument("SolverConfig: need 0 < dt_min < dt_init");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw std::invalid_argument("SolverConfig: cfl_safety must be in (0,1]");
    if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be > 0");
    if (!(snapshot_interval > 0.0))
        throw std::invalid_argument("SolverConfig: snapshot_interval must be > 0");
    if (!(theta > 1.0)) throw std::invalid_argument("SolverConfig: theta must be > 1");
}

State step(const State& state, const SolverConfig& cfg, const ForcingSpec& f, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    if (dt < cfg.dt_min) throw std::runtime_error("step: time-step underflow (dt < dt_min)");
    const Grid2D& g = state.u.grid;

    ScalarField ustar = state.u;
    if (cfg.chemotaxis) {
        ScalarField div = flux_divergence(chemotactic_flux(state.u, state.v));
        for (std::size_t k = 0; k < ustar.values.size(); ++k)
            ustar.values[k] -= dt * div.values[k];
    }
    ScalarField u_new = resolvent_solve(ustar, dt, 0.0);

    ScalarField ffield = f.sample(g, state.t);
    ScalarField rhs = state.v;
    const double a = dt / cfg.tau;
    for (std::size_t k = 0; k < rhs.values.size(); ++k)
        rhs.values[k] += a * (u_new.values[k] + ffield.values[k]);
    ScalarField v_new = resolvent_solve(rhs, a, a);

    return State{std::move(u_new), std::move(v_new), state.t + dt};
}

DtChoice adaptive_dt(const State& state, const SolverConfig& cfg) {
    const Grid2D& g = state.v.grid;
    double max_grad = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            max_grad = std::max(max_grad, std::abs(state.v(i, j) - state.v(i - 1, j)) / g.dx);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            max_grad = std::max(max_grad, std::abs(state.v(i, j) - state.v(i, j - 1)) / g.dy);
    constexpr double kGradFloor = 1e-30;
    double bound = cfg.cfl_safety * std::min(g.dx, g.dy) / std::max(max_grad, kGradFloor);
    DtChoice out;
    out.underflow = bound < cfg.dt_min;
    out.dt = std::clamp(bound, cfg.dt_min, cfg.dt_init);
    return out;
}

bool detect_blowup(const State& state, double theta, const SolverConfig& cfg) {
    double s = lp_norm(state.u, kInfinityOrder) + w1theta_norm(state.v, theta);
    return !(s <= cfg.blowup_sup_threshold);  // NaN counts as crossed
}

namespace {

DiagnosticsRecord make_record(const State& s, const ScalarField& ffield, const ForcingSpec& f,
                              const SolverConfig& cfg, const Trajectory& traj,
                              const ScalarField* v_prev, double dt, double prev_w,
                              double prev_vt_accum) {
    DiagnosticsRecord r;
    r.t = s.t;
    r.mass_u = integrate(s.u);
    r.v_l1 = lp_norm(s.v, 1.0);
    r.v_l1_exact = v_l1_exact(s.t, traj.v0_l1, traj.u0_l1, f, cfg.tau);
    r.u_linf = lp_norm(s.u, kInfinityOrder);
    r.u_l2 = lp_norm(s.u, 2.0);
    r.v_w1theta = w1theta_norm(s.v, cfg.theta);
    r.energy_w = energy_w(s.u, s.v, ffield);
    ScalarField fv(s.u.grid);
    for (std::size_t k = 0; k < fv.values.size(); ++k)
        fv.values[k] = ffield.values[k] * s.v.values[k];
    r.fv_integral = integrate(fv);
    r.ulogu_l1 = ulogu_l1(s.u);
    if (v_prev != nullptr && dt > 0.0) {
        r.dissipation = dissipation(s.u, s.v, *v_prev, dt, cfg.tau);
        r.energy_residual = (r.energy_w - prev_w) / dt + r.dissipation;
        ScalarField vt(s.v.grid);
        for (std::size_t k = 0; k < vt.values.size(); ++k)
            vt.values[k] = (s.v.values[k] - v_prev->values[k]) / dt;
        double vt2 = lp_norm(vt, 2.0);
        r.vt_l2_accum = prev_vt_accum + dt * vt2 * vt2;
    } else {
        r.vt_l2_accum = prev_vt_accum;
    }
    return r;
}

}  // namespace

Trajectory run(const State& initial, const SolverConfig& cfg, const ForcingSpec& f) {
    cfg.validate();
    check_same_grid(initial.u.grid, initial.v.grid, "run");
    if (!initial.u.finite() || !initial.v.finite())
        throw std::domain_error("run: non-finite initial data");

    Trajectory traj;
    traj.u0_l1 = integrate(initial.u);
    traj.v0_l1 = lp_norm(initial.v, 1.0);

    State state = initial;
    traj.snapshots.push_back(state);

    ScalarField f0 = f.sample(state.u.grid, state.t);
    traj.records.push_back(
        make_record(state, f0, f, cfg, traj, nullptr, 0.0, 0.0, 0.0));

    int snap_index = 1;
    const double eps_t = 1e-12 * std::max(1.0, cfg.t_end);

    while (state.t < cfg.t_end - eps_t) {
        DtChoice choice = cfg.adaptive ? adaptive_dt(state, cfg)
                                       : DtChoice{cfg.dt_init, false};
        if (choice.underflow) {
            traj.status = RunStatus::Blowup;
            traj.t_detect = state.t;
            return traj;
        }
        double next_snap = snap_index * cfg.snapshot_interval;
        double stop = std::min(cfg.t_end, next_snap);
        double dt = std::min(choice.dt, stop - state.t);

        ScalarField v_prev = state.v;
        double prev_w = traj.records.back().energy_w;
        double prev_accum = traj.records.back().vt_l2_accum;
        state = step(state, cfg, f, dt);

        bool finite = state.u.finite() && state.v.finite();
        if (!finite || detect_blowup(state, cfg.theta, cfg)) {
            traj.status = RunStatus::Blowup;
            traj.t_detect = state.t;
            traj.nan_warning = !finite;
            return traj;
        }

        ScalarField ffield = f.sample(state.u.grid, state.t);
        traj.records.push_back(
            make_record(state, ffield, f, cfg, traj, &v_prev, dt, prev_w, prev_accum));

        if (state.t >= next_snap - eps_t) {
            traj.snapshots.push_back(state);
            ++snap_index;
        }
    }
    return traj;
}

}  // namespace ksf
