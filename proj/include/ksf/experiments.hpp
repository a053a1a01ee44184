// Flagship experiments and file output: critical-mass sweep, small-data
// decay, diagnostics CSV emission.
#pragma once

#include "ksf/config.hpp"
#include "ksf/diagnostics.hpp"
#include "ksf/solver.hpp"

#include <string>
#include <vector>

namespace ksf {

// Round-trip-exact float serialization (shortest representation).
std::string format_double(double v);

// Fixed schema: t,mass_u,v_l1,v_l1_exact,u_linf,u_l2,v_w1theta,energy_w,
// dissipation,energy_residual,fv_integral,ulogu_l1,vt_l2_accum
void emit_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path);
std::vector<DiagnosticsRecord> parse_csv(const std::string& path);

struct SweepRow {
    double mass_factor = 0.0;  // multiple of 4*pi
    double mass = 0.0;
    RunStatus status = RunStatus::Completed;
    double t_detect = 0.0;
    bool ledger_plateau = false;
    bool energy_monotone = false;
    double final_w = 0.0;
    std::string error;  // nonempty when the row's run failed outright
};

// W non-increasing at every step within 1e-8 * (1 + |W|).
bool energy_monotone(const std::vector<DiagnosticsRecord>& records, double tol = 1e-8);

// Runs the solver once per configured mass (centered Gaussian u0); emits
// <output_dir>/sweep_summary.csv plus per-mass diagnostics CSVs.
std::vector<SweepRow> mass_sweep(const ExperimentConfig& cfg);

struct SmallDataResult {
    RunStatus status = RunStatus::Completed;
    DecayFit fit_u;
    DecayFit fit_v;
    double epsilon = 0.0;
};

// Scales the configured profiles so the three hypothesis norms equal epsilon
// exactly, runs to t_end, fits the decay constants, writes the g(t) series.
SmallDataResult small_data_experiment(const ExperimentConfig& cfg);

// Single run driven by a config: diagnostics CSV + terminal snapshot files.
Trajectory run_experiment(const ExperimentConfig& cfg);

}  // namespace ksf
