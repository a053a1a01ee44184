#include "ksf/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ksf {

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config error at '" + key + "': " + what);
}

double to_double(const std::string& key, const std::string& s) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) fail(key, "trailing characters in number '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(key, "expected a number, got '" + s + "'");
    }
}

int to_int(const std::string& key, const std::string& s) {
    double v = to_double(key, s);
    if (v != std::floor(v)) fail(key, "expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "on") return true;
    if (s == "false" || s == "0" || s == "off") return false;
    fail(key, "expected a boolean, got '" + s + "'");
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

// "name(a, b, ...)" or a bare "name"
std::pair<std::string, std::vector<double>> parse_call(const std::string& key,
                                                       const std::string& s) {
    auto open = s.find('(');
    if (open == std::string::npos) return {trim(s), {}};
    if (s.back() != ')') fail(key, "missing ')' in '" + s + "'");
    return {trim(s.substr(0, open)), to_list(key, s.substr(open + 1, s.size() - open - 2))};
}

}  // namespace

InitialSpec InitialSpec::parse(const std::string& text, const std::string& key) {
    auto [name, args] = parse_call(key, text);
    InitialSpec spec;
    if (name == "zero") {
        spec.kind = Kind::Zero;
        if (!args.empty()) fail(key, "zero takes no arguments");
    } else if (name == "constant") {
        spec.kind = Kind::Constant;
        if (args.size() != 1) fail(key, "constant(value) takes 1 argument");
        spec.value = args[0];
        if (spec.value < 0.0) fail(key, "constant value must be nonnegative");
    } else if (name == "gaussian") {
        spec.kind = Kind::Gaussian;
        if (args.size() != 4) fail(key, "gaussian(cx, cy, width, mass) takes 4 arguments");
        spec.cx = args[0];
        spec.cy = args[1];
        spec.width = args[2];
        spec.mass = args[3];
        if (!(spec.width > 0.0)) fail(key, "gaussian width must be > 0");
        if (spec.mass < 0.0) fail(key, "gaussian mass must be nonnegative");
    } else if (name == "mode-perturbed") {
        spec.kind = Kind::ModePerturbed;
        if (args.size() != 4) fail(key, "mode-perturbed(base, jx, jy, amplitude) takes 4 arguments");
        spec.base = args[0];
        spec.jx = static_cast<int>(args[1]);
        spec.jy = static_cast<int>(args[2]);
        spec.amplitude = args[3];
        if (spec.base < std::abs(spec.amplitude))
            fail(key, "mode-perturbed base must dominate |amplitude| (nonnegativity)");
    } else {
        fail(key, "unknown profile '" + name + "'");
    }
    return spec;
}

ScalarField InitialSpec::build(const Grid2D& g) const {
    switch (kind) {
        case Kind::Zero: return ScalarField(g, 0.0);
        case Kind::Constant: return ScalarField(g, value);
        case Kind::ModePerturbed: {
            ScalarField f = sample(g, [&](double x, double y) {
                return base + amplitude * std::cos(jx * M_PI * x / g.lx) *
                                  std::cos(jy * M_PI * y / g.ly);
            });
            return f;
        }
        case Kind::Gaussian: {
            double s2 = 2.0 * width * width;
            ScalarField f = sample(g, [&](double x, double y) {
                double dx = x - cx, dy = y - cy;
                return std::exp(-(dx * dx + dy * dy) / s2);
            });
            if (mass == 0.0) return ScalarField(g, 0.0);
            double current = integrate(f);
            double scale = mass / current;  // renormalize so the discrete integral hits mass
            for (double& v : f.values) v *= scale;
            return f;
        }
    }
    return ScalarField(g, 0.0);
}

ForcingSpec ExperimentConfig::forcing(const Grid2D& g) const {
    if (forcing_mode == ForcingMode::Zero) return ForcingSpec::zero();
    ScalarField base = forcing_profile.build(g);
    if (forcing_mode == ForcingMode::ConstantInTime) return ForcingSpec::constant(base);
    switch (forcing_modulation) {
        case Modulation::Identity: {
            ForcingSpec f = ForcingSpec::constant(base);
            f.mode = ForcingMode::TimeDependent;
            return f;
        }
        case Modulation::ExponentialDecay: return ForcingSpec::exp_decay(base, forcing_rate);
        case Modulation::Sinusoidal:
            return ForcingSpec::sinusoidal(base, forcing_amplitude, forcing_period);
    }
    return ForcingSpec::zero();
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config error at line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config error at line " + std::to_string(lineno) +
                                           ": empty key");
        if (kv.count(key)) throw ConfigError("config error at '" + key + "': duplicate key");
        kv[key] = value;
    }

    ExperimentConfig cfg;
    auto take = [&](const std::string& key) -> std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };

    if (auto* v = take("kind")) {
        if (*v == "run") cfg.kind = ExperimentKind::Run;
        else if (*v == "mass-sweep") cfg.kind = ExperimentKind::MassSweep;
        else if (*v == "small-data") cfg.kind = ExperimentKind::SmallData;
        else if (*v == "verify-inequalities") cfg.kind = ExperimentKind::VerifyInequalities;
        else if (*v == "verify-semigroup") cfg.kind = ExperimentKind::VerifySemigroup;
        else fail("kind", "unknown experiment kind '" + *v + "'");
    }
    if (auto* v = take("grid.nx")) cfg.nx = to_int("grid.nx", *v);
    if (auto* v = take("grid.ny")) cfg.ny = to_int("grid.ny", *v);
    if (auto* v = take("grid.lx")) cfg.lx = to_double("grid.lx", *v);
    if (auto* v = take("grid.ly")) cfg.ly = to_double("grid.ly", *v);

    if (auto* v = take("solver.tau")) cfg.solver.tau = to_double("solver.tau", *v);
    if (auto* v = take("solver.dt_init")) cfg.solver.dt_init = to_double("solver.dt_init", *v);
    if (auto* v = take("solver.dt_min")) cfg.solver.dt_min = to_double("solver.dt_min", *v);
    if (auto* v = take("solver.cfl_safety"))
        cfg.solver.cfl_safety = to_double("solver.cfl_safety", *v);
    if (auto* v = take("solver.t_end")) cfg.solver.t_end = to_double("solver.t_end", *v);
    if (auto* v = take("solver.blowup_threshold"))
        cfg.solver.blowup_sup_threshold = to_double("solver.blowup_threshold", *v);
    if (auto* v = take("solver.snapshot_interval"))
        cfg.solver.snapshot_interval = to_double("solver.snapshot_interval", *v);
    if (auto* v = take("solver.theta")) cfg.solver.theta = to_double("solver.theta", *v);
    if (auto* v = take("solver.chemotaxis"))
        cfg.solver.chemotaxis = to_bool("solver.chemotaxis", *v);
    if (auto* v = take("solver.adaptive")) cfg.solver.adaptive = to_bool("solver.adaptive", *v);

    if (auto* v = take("forcing.mode")) {
        if (*v == "zero") cfg.forcing_mode = ForcingMode::Zero;
        else if (*v == "constant") cfg.forcing_mode = ForcingMode::ConstantInTime;
        else if (*v == "time-dependent") cfg.forcing_mode = ForcingMode::TimeDependent;
        else fail("forcing.mode", "expected zero | constant | time-dependent");
    }
    if (auto* v = take("forcing.profile"))
        cfg.forcing_profile = InitialSpec::parse(*v, "forcing.profile");
    if (auto* v = take("forcing.modulation")) {
        auto [name, args] = parse_call("forcing.modulation", *v);
        if (name == "identity") {
            cfg.forcing_modulation = Modulation::Identity;
        } else if (name == "exp-decay") {
            if (args.size() != 1) fail("forcing.modulation", "exp-decay(rate) takes 1 argument");
            cfg.forcing_modulation = Modulation::ExponentialDecay;
            cfg.forcing_rate = args[0];
        } else if (name == "sinusoidal") {
            if (args.size() != 2)
                fail("forcing.modulation", "sinusoidal(amplitude, period) takes 2 arguments");
            cfg.forcing_modulation = Modulation::Sinusoidal;
            cfg.forcing_amplitude = args[0];
            cfg.forcing_period = args[1];
            if (!(cfg.forcing_amplitude >= 0.0 && cfg.forcing_amplitude < 1.0))
                fail("forcing.modulation", "sinusoidal amplitude must be in [0,1)");
        } else {
            fail("forcing.modulation", "unknown modulation '" + name + "'");
        }
    }

    if (auto* v = take("initial.u0")) cfg.u0 = InitialSpec::parse(*v, "initial.u0");
    if (auto* v = take("initial.v0")) cfg.v0 = InitialSpec::parse(*v, "initial.v0");

    if (auto* v = take("sweep.mass_factors"))
        cfg.sweep.mass_factors = to_list("sweep.mass_factors", *v);
    if (auto* v = take("sweep.width")) cfg.sweep.width = to_double("sweep.width", *v);

    if (auto* v = take("smalldata.epsilon"))
        cfg.smalldata.epsilon = to_double("smalldata.epsilon", *v);
    if (auto* v = take("smalldata.delta0")) cfg.smalldata.delta0 = to_double("smalldata.delta0", *v);
    if (auto* v = take("smalldata.r")) cfg.smalldata.r = to_double("smalldata.r", *v);
    if (auto* v = take("smalldata.n")) cfg.smalldata.n = to_int("smalldata.n", *v);
    if (auto* v = take("smalldata.theta")) cfg.smalldata.theta = to_double("smalldata.theta", *v);

    if (auto* v = take("ineq.young_draws")) cfg.ineq.young_draws = to_int("ineq.young_draws", *v);
    if (auto* v = take("ineq.malpha_draws")) cfg.ineq.malpha_draws = to_int("ineq.malpha_draws", *v);
    if (auto* v = take("ineq.field_samples"))
        cfg.ineq.field_samples = to_int("ineq.field_samples", *v);
    if (auto* v = take("ineq.max_mode")) cfg.ineq.max_mode = to_int("ineq.max_mode", *v);
    if (auto* v = take("ineq.decay_exponent"))
        cfg.ineq.decay_exponent = to_double("ineq.decay_exponent", *v);
    if (auto* v = take("ineq.amplitude_cap"))
        cfg.ineq.amplitude_cap = to_double("ineq.amplitude_cap", *v);

    if (auto* v = take("semigroup.trials")) cfg.semigroup.trials = to_int("semigroup.trials", *v);

    if (auto* v = take("output_dir")) cfg.output_dir = *v;
    if (auto* v = take("seed")) cfg.seed = static_cast<std::uint64_t>(to_double("seed", *v));
    if (auto* v = take("threads")) cfg.threads = to_int("threads", *v);

    static const char* known[] = {
        "kind", "grid.nx", "grid.ny", "grid.lx", "grid.ly", "solver.tau", "solver.dt_init",
        "solver.dt_min", "solver.cfl_safety", "solver.t_end", "solver.blowup_threshold",
        "solver.snapshot_interval", "solver.theta", "solver.chemotaxis", "solver.adaptive",
        "forcing.mode", "forcing.profile", "forcing.modulation", "initial.u0", "initial.v0",
        "sweep.mass_factors", "sweep.width", "smalldata.epsilon", "smalldata.delta0",
        "smalldata.r", "smalldata.n", "smalldata.theta", "ineq.young_draws", "ineq.malpha_draws",
        "ineq.field_samples", "ineq.max_mode", "ineq.decay_exponent", "ineq.amplitude_cap",
        "semigroup.trials", "output_dir", "seed", "threads"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* k : known) ok |= key == k;
        if (!ok) fail(key, "unknown key");
    }

    // Cross-field invariants, checked at parse time with field paths.
    try {
        (void)cfg.grid();
    } catch (const std::exception& e) {
        fail("grid", e.what());
    }
    try {
        cfg.solver.validate();
    } catch (const std::exception& e) {
        fail("solver", e.what());
    }
    if (cfg.kind == ExperimentKind::SmallData) {
        const auto& sd = cfg.smalldata;
        if (!(sd.delta0 > 0.0 && sd.delta0 < 1.0)) fail("smalldata.delta0", "must be in (0,1)");
        if (!(sd.r > 1.0)) fail("smalldata.r", "must be > 1");
        if (sd.n < 2) fail("smalldata.n", "must be >= 2");
        double upper = (sd.n * sd.n + 2.0 * sd.n * sd.delta0) / (sd.n - 2.0 * sd.delta0);
        if (!(sd.theta > sd.n && sd.theta < upper))
            fail("smalldata.theta", "must satisfy n < theta < (n^2+2n*delta0)/(n-2*delta0)");
        if (!(sd.epsilon >= 0.0)) fail("smalldata.epsilon", "must be >= 0");
    }
    if (cfg.threads < 1) fail("threads", "must be >= 1");
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config error: cannot open file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace ksf
