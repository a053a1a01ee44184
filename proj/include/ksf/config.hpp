// Flat key = value experiment configuration with dotted section prefixes.
#pragma once

#include "ksf/grid.hpp"
#include "ksf/solver.hpp"

#include <cstdint>
#include <string>

namespace ksf {

enum class ExperimentKind { Run, MassSweep, SmallData, VerifyInequalities, VerifySemigroup };

struct InitialSpec {
    enum class Kind { Gaussian, Constant, ModePerturbed, Zero };
    Kind kind = Kind::Zero;
    // gaussian(cx, cy, width, mass): profile rescaled so integrate(field) == mass exactly
    double cx = 0.5, cy = 0.5, width = 0.1, mass = 1.0;
    double value = 0.0;                      // constant(value)
    double base = 0.0, amplitude = 0.0;      // mode-perturbed(base, jx, jy, amplitude)
    int jx = 1, jy = 0;

    ScalarField build(const Grid2D& g) const;
    static InitialSpec parse(const std::string& text, const std::string& key_path);
};

struct SweepOptions {
    std::vector<double> mass_factors = {0.5, 0.9, 1.5, 3.0};  // multiples of 4*pi
    double width = 0.1;
};

struct SmallDataOptions {
    double epsilon = 1e-3;
    double delta0 = 0.5;
    double r = 2.0;
    int n = 2;
    double theta = 3.0;
};

struct IneqOptions {
    int young_draws = 100000;
    int malpha_draws = 10000;
    int field_samples = 500;
    int max_mode = 16;
    double decay_exponent = 1.5;
    double amplitude_cap = 8.0;
};

struct SemigroupOptions {
    int trials = 20;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Run;
    int nx = 128, ny = 128;
    double lx = 1.0, ly = 1.0;
    SolverConfig solver;
    ForcingMode forcing_mode = ForcingMode::Zero;
    InitialSpec forcing_profile;
    Modulation forcing_modulation = Modulation::Identity;
    double forcing_rate = 0.0, forcing_amplitude = 0.0, forcing_period = 1.0;
    InitialSpec u0, v0;
    SweepOptions sweep;
    SmallDataOptions smalldata;
    IneqOptions ineq;
    SemigroupOptions semigroup;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int threads = 1;

    Grid2D grid() const { return Grid2D(nx, ny, lx, ly); }
    ForcingSpec forcing(const Grid2D& g) const;
};

// Errors (missing file, unknown key, type mismatch, invariant violation) carry
// the offending key path.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace ksf
