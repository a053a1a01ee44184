#include "ksf/experiments.hpp"

#include "ksf/spectral.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace ksf {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

static const char* kCsvHeader =
    "t,mass_u,v_l1,v_l1_exact,u_linf,u_l2,v_w1theta,energy_w,dissipation,energy_residual,"
    "fv_integral,ulogu_l1,vt_l2_accum";

void emit_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: byte-identical across platforms
    if (!os) throw std::runtime_error("emit_csv: cannot open " + path);
    os << kCsvHeader << "\n";
    for (const DiagnosticsRecord& r : records) {
        os << format_double(r.t) << ',' << format_double(r.mass_u) << ',' << format_double(r.v_l1)
           << ',' << format_double(r.v_l1_exact) << ',' << format_double(r.u_linf) << ','
           << format_double(r.u_l2) << ',' << format_double(r.v_w1theta) << ','
           << format_double(r.energy_w) << ',' << format_double(r.dissipation) << ','
           << format_double(r.energy_residual) << ',' << format_double(r.fv_integral) << ','
           << format_double(r.ulogu_l1) << ',' << format_double(r.vt_l2_accum) << "\n";
    }
    if (!os) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::vector<DiagnosticsRecord> parse_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("parse_csv: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw std::runtime_error("parse_csv: bad header in " + path);
    std::vector<DiagnosticsRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        double vals[13];
        for (int k = 0; k < 13; ++k) {
            if (!std::getline(ss, cell, ',')) throw std::runtime_error("parse_csv: short row");
            double v;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{}) throw std::runtime_error("parse_csv: bad number " + cell);
            vals[k] = v;
        }
        DiagnosticsRecord r;
        r.t = vals[0];
        r.mass_u = vals[1];
        r.v_l1 = vals[2];
        r.v_l1_exact = vals[3];
        r.u_linf = vals[4];
        r.u_l2 = vals[5];
        r.v_w1theta = vals[6];
        r.energy_w = vals[7];
        r.dissipation = vals[8];
        r.energy_residual = vals[9];
        r.fv_integral = vals[10];
        r.ulogu_l1 = vals[11];
        r.vt_l2_accum = vals[12];
        out.push_back(r);
    }
    return out;
}

bool energy_monotone(const std::vector<DiagnosticsRecord>& records, double tol) {
    for (std::size_t k = 1; k < records.size(); ++k) {
        double prev = records[k - 1].energy_w;
        if (records[k].energy_w > prev + tol * (1.0 + std::abs(prev))) return false;
    }
    return true;
}

Trajectory run_experiment(const ExperimentConfig& cfg) {
    Grid2D g = cfg.grid();
    State initial{cfg.u0.build(g), cfg.v0.build(g), 0.0};
    Trajectory traj = run(initial, cfg.solver, cfg.forcing(g));
    std::filesystem::create_directories(cfg.output_dir);
    emit_csv(traj.records, cfg.output_dir + "/diagnostics.csv");
    if (!traj.snapshots.empty()) {
        write_snapshot(traj.snapshots.back().u, cfg.output_dir + "/u_final.ksf");
        write_snapshot(traj.snapshots.back().v, cfg.output_dir + "/v_final.ksf");
    }
    return traj;
}

std::vector<SweepRow> mass_sweep(const ExperimentConfig& cfg) {
    Grid2D g = cfg.grid();
    const auto& factors = cfg.sweep.mass_factors;
    std::vector<SweepRow> rows(factors.size());
    std::vector<std::vector<DiagnosticsRecord>> diag(factors.size());

    auto work = [&](std::size_t idx) {
        SweepRow row;
        row.mass_factor = factors[idx];
        row.mass = factors[idx] * 4.0 * M_PI;
        try {
            InitialSpec u0spec;
            u0spec.kind = InitialSpec::Kind::Gaussian;
            u0spec.cx = 0.5 * g.lx;
            u0spec.cy = 0.5 * g.ly;
            u0spec.width = cfg.sweep.width;
            u0spec.mass = row.mass;
            State initial{u0spec.build(g), cfg.v0.build(g), 0.0};
            Trajectory traj = run(initial, cfg.solver, cfg.forcing(g));
            row.status = traj.status;
            row.t_detect = traj.t_detect;
            row.ledger_plateau = bounds_ledger(traj).all_plateaued;
            row.energy_monotone = energy_monotone(traj.records);
            row.final_w = traj.records.back().energy_w;
            diag[idx] = traj.records;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows[idx] = row;
    };

    if (cfg.threads > 1 && factors.size() > 1) {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < factors.size(); ++k) pool.emplace_back(work, k);
        for (auto& th : pool) th.join();
    } else {
        for (std::size_t k = 0; k < factors.size(); ++k) work(k);
    }

    // Single-writer output in list order keeps byte-level determinism.
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream os(cfg.output_dir + "/sweep_summary.csv", std::ios::binary);
    if (!os) throw std::runtime_error("mass_sweep: cannot open summary file");
    os << "mass_factor,mass,status,t_detect,ledger_plateau,energy_monotone,final_w,error\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const SweepRow& r = rows[k];
        os << format_double(r.mass_factor) << ',' << format_double(r.mass) << ','
           << (r.error.empty() ? (r.status == RunStatus::Completed ? "completed" : "blowup")
                               : "error")
           << ',' << format_double(r.t_detect) << ',' << (r.ledger_plateau ? 1 : 0) << ','
           << (r.energy_monotone ? 1 : 0) << ',' << format_double(r.final_w) << ',' << r.error
           << "\n";
        if (!diag[k].empty()) {
            std::ostringstream name;
            name << cfg.output_dir << "/mass_" << format_double(r.mass_factor) << ".csv";
            emit_csv(diag[k], name.str());
        }
    }
    return rows;
}

SmallDataResult small_data_experiment(const ExperimentConfig& cfg) {
    Grid2D g = cfg.grid();
    const SmallDataOptions& sd = cfg.smalldata;
    const double q0 = 0.5 * sd.n + sd.delta0;

    SmallDataResult result;
    result.epsilon = sd.epsilon;

    ScalarField u0 = cfg.u0.build(g);
    ScalarField v0 = cfg.v0.build(g);
    ForcingSpec f = cfg.forcing(g);

    // Rescale so the three hypothesis norms equal epsilon exactly.
    auto rescale = [](ScalarField& field, double norm, double target) {
        if (norm == 0.0) return;
        double s = target / norm;
        for (double& v : field.values) v *= s;
    };
    rescale(u0, lp_norm(u0, q0), sd.epsilon);
    rescale(v0, w1p_seminorm(v0, sd.theta), sd.epsilon);
    if (f.mode != ForcingMode::Zero) {
        double peak = 1.0;
        if (f.mode == ForcingMode::TimeDependent && f.modulation == Modulation::Sinusoidal)
            peak = 1.0 + f.amplitude;
        rescale(f.base, peak * lp_norm(f.base, q0), sd.epsilon);
    }
    if (sd.epsilon == 0.0) {
        u0 = ScalarField(g, 0.0);
        v0 = ScalarField(g, 0.0);
        f = ForcingSpec::zero();
    }

    Trajectory traj = run(State{std::move(u0), std::move(v0), 0.0}, cfg.solver, f);
    result.status = traj.status;
    if (traj.status == RunStatus::Blowup) return result;  // contradicts the small-data theorem

    // epsilon = 0 runs the zero trajectory: g vanishes and the guard in the
    // fit yields C = 0.
    DecayCheckParams params(sd.theta, sd.delta0, sd.r, sd.n, sd.epsilon);
    result.fit_u = decay_check_u(traj, params);
    result.fit_v = decay_check_v(traj, params, cfg.solver.tau);

    std::filesystem::create_directories(cfg.output_dir);
    emit_csv(traj.records, cfg.output_dir + "/smalldata_diagnostics.csv");
    std::ofstream os(cfg.output_dir + "/smalldata_series.csv", std::ios::binary);
    os << "t,g_u,g_v\n";
    SpectralCoeffs cu0 = cosine_transform(traj.snapshots.front().u);
    for (const State& s : traj.snapshots) {
        ScalarField lin = heat_semigroup(traj.snapshots.front().u, s.t);
        ScalarField du = s.u;
        for (std::size_t i = 0; i < du.values.size(); ++i) du.values[i] -= lin.values[i];
        // v comparison flow per mode, same closed form as decay_check_v
        SpectralCoeffs cv0 = cosine_transform(traj.snapshots.front().v);
        for (int k = 0; k < g.ny; ++k)
            for (int j = 0; j < g.nx; ++j) {
                double mu = eigenvalue(g, j, k);
                cv0(j, k) = std::exp(-(mu + 1.0) * s.t / cfg.solver.tau) * cv0(j, k) +
                            (std::exp(-mu * s.t) - std::exp(-(mu + 1.0) * s.t)) / cfg.solver.tau *
                                cu0(j, k);
            }
        ScalarField dv = s.v;
        ScalarField linv = inverse_cosine_transform(cv0);
        for (std::size_t i = 0; i < dv.values.size(); ++i) dv.values[i] -= linv.values[i];
        os << format_double(s.t) << ',' << format_double(lp_norm(du, kInfinityOrder)) << ','
           << format_double(w1p_seminorm(dv, sd.theta)) << "\n";
    }
    std::ofstream rep(cfg.output_dir + "/smalldata_report.csv", std::ios::binary);
    rep << "epsilon,status,fitted_c_u,sup_g_u,fitted_c_v,sup_g_v\n";
    rep << format_double(result.epsilon) << ','
        << (result.status == RunStatus::Completed ? "completed" : "blowup") << ','
        << format_double(result.fit_u.fitted_c) << ',' << format_double(result.fit_u.sup_residual)
        << ',' << format_double(result.fit_v.fitted_c) << ','
        << format_double(result.fit_v.sup_residual) << "\n";
    return result;
}

}  // namespace ksf
