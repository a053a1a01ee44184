// ksf: batch front-end for the forced Keller-Segel solver and its
// verification experiments.
#include "ksf/experiments.hpp"
#include "ksf/inequalities.hpp"
#include "ksf/semigroup_checks.hpp"
#include "ksf/spectral.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;

struct CommonFlags {
    std::string output_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

ksf::ExperimentConfig load(const std::string& path, const CommonFlags& flags) {
    ksf::ExperimentConfig cfg = ksf::parse_config(path);
    if (!flags.output_dir.empty()) cfg.output_dir = flags.output_dir;
    if (flags.seed_set) cfg.seed = flags.seed;
    if (flags.threads > 0) cfg.threads = flags.threads;
    return cfg;
}

int cmd_run(const ksf::ExperimentConfig& cfg) {
    ksf::Trajectory traj = ksf::run_experiment(cfg);
    if (traj.status == ksf::RunStatus::Completed) {
        std::cout << "completed t_end=" << ksf::format_double(cfg.solver.t_end) << "\n";
    } else {
        std::cout << "blowup t_detect=" << ksf::format_double(traj.t_detect)
                  << (traj.nan_warning ? " (nan before threshold; quality warning)" : "") << "\n";
    }
    std::cout << "diagnostics: " << cfg.output_dir << "/diagnostics.csv\n";
    return kExitOk;
}

int cmd_sweep(const ksf::ExperimentConfig& cfg) {
    auto rows = ksf::mass_sweep(cfg);
    bool any_error = false;
    for (const auto& r : rows) {
        std::cout << "mass " << ksf::format_double(r.mass_factor) << " x 4pi: ";
        if (!r.error.empty()) {
            std::cout << "error (" << r.error << ")\n";
            any_error = true;
            continue;
        }
        if (r.status == ksf::RunStatus::Completed)
            std::cout << "completed, plateau=" << (r.ledger_plateau ? "yes" : "no")
                      << ", energy_monotone=" << (r.energy_monotone ? "yes" : "no")
                      << ", final_W=" << ksf::format_double(r.final_w) << "\n";
        else
            std::cout << "blowup at t=" << ksf::format_double(r.t_detect) << "\n";
    }
    std::cout << "summary: " << cfg.output_dir << "/sweep_summary.csv\n";
    return any_error ? kExitCheckFailed : kExitOk;
}

int cmd_smalldata(const ksf::ExperimentConfig& cfg) {
    ksf::SmallDataResult res = ksf::small_data_experiment(cfg);
    if (res.status == ksf::RunStatus::Blowup) {
        std::cout << "FAIL small-data run blew up (contradicts the small-data regime at eps="
                  << ksf::format_double(res.epsilon) << ")\n";
        return kExitCheckFailed;
    }
    std::cout << "completed eps=" << ksf::format_double(res.epsilon)
              << " fitted_C_u=" << ksf::format_double(res.fit_u.fitted_c)
              << " fitted_C_v=" << ksf::format_double(res.fit_v.fitted_c) << "\n";
    std::cout << "report: " << cfg.output_dir << "/smalldata_report.csv\n";
    return std::isfinite(res.fit_u.fitted_c) && std::isfinite(res.fit_v.fitted_c)
               ? kExitOk
               : kExitCheckFailed;
}

// Largest M solving M = c1 + c2 M^beta, by bisection.
double implicit_bound_root(double c1, double c2, double beta) {
    auto g = [&](double m) { return c1 + c2 * std::pow(m, beta) - m; };
    double hi = 1.0;
    while (g(hi) > 0.0) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return hi;
}

int cmd_verify_ineq(const ksf::ExperimentConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    int young_viol = 0;
    for (int k = 0; k < cfg.ineq.young_draws; ++k) {
        double a = 10.0 * unif(rng), b = 10.0 * unif(rng);
        double eps = 2.0 * unif(rng) + 1e-3;
        double p = 1.0 + 4.0 * unif(rng) + 1e-3;
        auto [lhs, rhs] = ksf::young_bound(a, b, eps, p);
        if (lhs > rhs * (1.0 + 1e-12)) ++young_viol;
    }

    int malpha_viol = 0;
    for (int k = 0; k < cfg.ineq.malpha_draws; ++k) {
        double c1 = 5.0 * unif(rng) + 1e-6, c2 = 5.0 * unif(rng) + 1e-6;
        double beta = 0.05 + 0.9 * unif(rng);
        double m0 = ksf::malpha_bound(c1, c2, beta);
        double root = implicit_bound_root(c1, c2, beta);
        if (root > m0 * (1.0 + 1e-10)) ++malpha_viol;
    }

    ksf::FieldSampler sampler;
    sampler.max_mode = cfg.ineq.max_mode;
    sampler.decay_exponent = cfg.ineq.decay_exponent;
    sampler.amplitude_cap = cfg.ineq.amplitude_cap;
    sampler.seed = cfg.seed;

    ksf::Grid2D coarse(std::max(16, cfg.nx / 2), std::max(16, cfg.ny / 2), cfg.lx, cfg.ly);
    ksf::Grid2D fine = cfg.grid();
    auto tm_coarse = ksf::trudinger_moser_check(sampler, coarse, cfg.ineq.field_samples);
    auto tm_fine = ksf::trudinger_moser_check(sampler, fine, cfg.ineq.field_samples);
    auto biler_coarse = ksf::biler_check(sampler, coarse, 3.0, 0.1, cfg.ineq.field_samples);
    auto biler_fine = ksf::biler_check(sampler, fine, 3.0, 0.1, cfg.ineq.field_samples);

    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream os(cfg.output_dir + "/inequalities.csv", std::ios::binary);
    os << "name,samples,worst_ratio,violated\n";
    auto emit = [&](const std::string& name, int samples, double worst, bool violated) {
        os << name << ',' << samples << ',' << ksf::format_double(worst) << ','
           << (violated ? 1 : 0) << "\n";
        std::cout << name << ": samples=" << samples
                  << " worst_ratio=" << ksf::format_double(worst)
                  << (violated ? " VIOLATED" : " ok") << "\n";
    };
    emit("young", cfg.ineq.young_draws, 0.0, young_viol > 0);
    emit("malpha", cfg.ineq.malpha_draws, 0.0, malpha_viol > 0);
    emit(tm_coarse.name + "_coarse", tm_coarse.samples, tm_coarse.worst_ratio, false);
    emit(tm_fine.name + "_fine", tm_fine.samples, tm_fine.worst_ratio, false);
    emit(biler_coarse.name + "_coarse", biler_coarse.samples, biler_coarse.worst_ratio, false);
    emit(biler_fine.name + "_fine", biler_fine.samples, biler_fine.worst_ratio, false);

    double tm_shift = std::abs(tm_fine.worst_ratio - tm_coarse.worst_ratio) /
                      std::max(tm_coarse.worst_ratio, 1e-300);
    double biler_shift = std::abs(biler_fine.worst_ratio - biler_coarse.worst_ratio) /
                         std::max(biler_coarse.worst_ratio, 1e-300);
    std::cout << "refinement shift: trudinger_moser=" << ksf::format_double(tm_shift)
              << " biler=" << ksf::format_double(biler_shift) << "\n";

    bool ok = young_viol == 0 && malpha_viol == 0 && std::isfinite(tm_fine.worst_ratio) &&
              std::isfinite(biler_fine.worst_ratio);
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify_semigroup(const ksf::ExperimentConfig& cfg) {
    ksf::Grid2D g = cfg.grid();
    ksf::FieldSampler sampler;
    sampler.seed = cfg.seed;
    bool ok = true;

    double worst_prop = 0.0, worst_mass = 0.0, worst_max = 0.0, worst_decay = 0.0;
    for (int k = 0; k < cfg.semigroup.trials; ++k) {
        ksf::ScalarField f = sampler.sample(g, static_cast<std::uint64_t>(k));
        ksf::ScalarField ab = ksf::heat_semigroup(ksf::heat_semigroup(f, 0.1), 0.5);
        ksf::ScalarField once = ksf::heat_semigroup(f, 0.6);
        for (std::size_t i = 0; i < ab.values.size(); ++i) ab.values[i] -= once.values[i];
        double scale = ksf::lp_norm(f, ksf::kInfinityOrder);
        worst_prop = std::max(worst_prop, ksf::lp_norm(ab, ksf::kInfinityOrder) / scale);
        worst_mass = std::max(worst_mass,
                              std::abs(ksf::integrate(ksf::heat_semigroup(f, 0.7)) -
                                       ksf::integrate(f)) /
                                  std::max(std::abs(ksf::integrate(f)), 1e-30));
        worst_max = std::max(worst_max,
                             ksf::lp_norm(ksf::heat_semigroup(f, 0.3), ksf::kInfinityOrder) /
                                 scale);
        ksf::ScalarField z = sampler.sample_zero_mean(g, static_cast<std::uint64_t>(k) + 1000);
        double l2_0 = ksf::lp_norm(z, 2.0);
        double l2_t = ksf::lp_norm(ksf::heat_semigroup(z, 0.4), 2.0);
        worst_decay = std::max(worst_decay, l2_t / (std::exp(-ksf::lambda1(g) * 0.4) * l2_0));
    }
    std::cout << "semigroup property: worst relative defect " << ksf::format_double(worst_prop)
              << "\n";
    std::cout << "mass invariance: worst relative defect " << ksf::format_double(worst_mass)
              << "\n";
    std::cout << "maximum principle: worst amplification " << ksf::format_double(worst_max) << "\n";
    std::cout << "zero-mean decay: worst ratio vs e^{-lambda1 t} " << ksf::format_double(worst_decay)
              << "\n";
    ok &= worst_prop < 1e-12 && worst_mass < 1e-12 && worst_max <= 1.0 + 1e-12 &&
          worst_decay <= 1.0 + 1e-12;

    double worst_conv = 0.0;
    for (double alpha : {0.0, 0.25, 0.5, 0.75})
        for (double beta : {0.0, 0.25, 0.5, 0.75})
            for (auto [gamma, delta] : {std::pair{2.0, 1.0}, std::pair{1.0, 2.0}}) {
                ksf::SemigroupParams p(alpha, beta, gamma, delta);
                worst_conv =
                    std::max(worst_conv, ksf::convolution_bound_check(p, {0.1, 1.0, 10.0, 50.0}));
            }
    std::cout << "convolution bound: empirical C = " << ksf::format_double(worst_conv) << "\n";
    ok &= std::isfinite(worst_conv) && worst_conv < 1e3;

    ksf::ScalarField w = sampler.sample_zero_mean(g, 424242);
    double smoothing = ksf::smoothing_estimate_check(w, 2.0, 4.0, {0.05, 0.1, 0.5, 1.0, 2.0});
    std::cout << "gradient smoothing: empirical C = " << ksf::format_double(smoothing) << "\n";
    ok &= std::isfinite(smoothing);

    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forced Keller-Segel solver and verification harness"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string config_path;
    struct Sub {
        CLI::App* cmd;
        int (*fn)(const ksf::ExperimentConfig&);
    };
    std::vector<Sub> subs;
    auto add = [&](const char* name, const char* desc, int (*fn)(const ksf::ExperimentConfig&)) {
        CLI::App* c = app.add_subcommand(name, desc);
        c->add_option("config", config_path, "experiment config file")->required();
        c->add_option("--output-dir", flags.output_dir, "override output directory");
        c->add_option("--seed", flags.seed, "override RNG seed")
            ->each([&](const std::string&) { flags.seed_set = true; });
        c->add_option("--threads", flags.threads, "worker threads for sweeps");
        subs.push_back({c, fn});
    };
    add("run", "single trajectory with diagnostics", cmd_run);
    add("sweep", "critical-mass sweep", cmd_sweep);
    add("smalldata", "small-data decay experiment", cmd_smalldata);
    add("verify-ineq", "inequality audits", cmd_verify_ineq);
    add("verify-semigroup", "semigroup and convolution-bound checks", cmd_verify_semigroup);

    CLI11_PARSE(app, argc, argv);

    try {
        ksf::ExperimentConfig cfg = load(config_path, flags);
        for (const Sub& s : subs)
            if (s.cmd->parsed()) return s.fn(cfg);
        return kExitConfig;
    } catch (const std::exception& e) {
        std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        return what.rfind("config error", 0) == 0 ? kExitConfig : 1;
    }
}
