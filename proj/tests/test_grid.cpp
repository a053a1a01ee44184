#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ksf/grid.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

using ksf::Grid2D;
using ksf::ScalarField;

TEST_CASE("grid geometry and validation") {
    Grid2D g(8, 16, 2.0, 4.0);
    CHECK(g.dx == doctest::Approx(0.25));
    CHECK(g.dy == doctest::Approx(0.25));
    CHECK(g.area() == doctest::Approx(8.0));
    CHECK(g.x(0) == doctest::Approx(0.125));
    CHECK(g.y(15) == doctest::Approx(3.875));
    CHECK_THROWS_AS(Grid2D(3, 8, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Grid2D(8, 8, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("integrate: exact for constants, midpoint-exact for linears") {
    Grid2D g(32, 32, 1.0, 1.0);
    ScalarField c = ksf::sample(g, [](double, double) { return 3.0; });
    CHECK(ksf::integrate(c) == doctest::Approx(3.0).epsilon(1e-14));
    // midpoint rule integrates x exactly
    ScalarField lin = ksf::sample(g, [](double x, double) { return x; });
    CHECK(ksf::integrate(lin) == doctest::Approx(0.5).epsilon(1e-14));
    lin.values[5] = std::nan("");
    CHECK_THROWS_AS(ksf::integrate(lin), std::domain_error);
}

TEST_CASE("integrate is linear") {
    Grid2D g(16, 16, 1.0, 1.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarField a(g), b(g), combo(g);
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        a.values[k] = u(rng);
        b.values[k] = u(rng);
        combo.values[k] = 2.0 * a.values[k] - 3.0 * b.values[k];
    }
    CHECK(ksf::integrate(combo) ==
          doctest::Approx(2.0 * ksf::integrate(a) - 3.0 * ksf::integrate(b)).epsilon(1e-13));
}

TEST_CASE("lp norms: closed forms and Hoelder consistency") {
    Grid2D g(64, 64, 1.0, 1.0);
    ScalarField c = ksf::sample(g, [](double, double) { return -2.0; });
    CHECK(ksf::lp_norm(c, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ksf::lp_norm(c, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ksf::lp_norm(c, ksf::kInfinityOrder) == doctest::Approx(2.0));
    // ||cos(pi x)||_2 over the unit square is 1/sqrt(2)
    ScalarField cosx = ksf::sample(g, [](double x, double) { return std::cos(std::numbers::pi * x); });
    CHECK(ksf::lp_norm(cosx, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
    // interpolation: ||f||_2^2 <= ||f||_1 ||f||_inf
    ScalarField f = ksf::sample(g, [](double x, double y) { return std::exp(x - y); });
    double n1 = ksf::lp_norm(f, 1.0), n2 = ksf::lp_norm(f, 2.0),
           ni = ksf::lp_norm(f, ksf::kInfinityOrder);
    CHECK(n2 * n2 <= n1 * ni * (1.0 + 1e-14));
    CHECK_THROWS_AS(ksf::lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("gradient and Sobolev seminorm refine to the continuum value") {
    // |cos(pi x)|_{H^1} seminorm on the unit square is pi/sqrt(2)
    double target = std::numbers::pi / std::sqrt(2.0);
    double prev_err = 0.0;
    for (int n : {32, 64, 128}) {
        Grid2D g(n, n, 1.0, 1.0);
        ScalarField f =
            ksf::sample(g, [](double x, double) { return std::cos(std::numbers::pi * x); });
        double err = std::abs(ksf::w1p_seminorm(f, 2.0) - target);
        if (n > 32) CHECK(err < 0.6 * prev_err);
        prev_err = err;
    }
    Grid2D g(128, 128, 1.0, 1.0);
    ScalarField f = ksf::sample(g, [](double x, double) { return std::cos(std::numbers::pi * x); });
    CHECK(ksf::w1p_seminorm(f, 2.0) == doctest::Approx(target).epsilon(5e-3));
    double w1 = ksf::w1theta_norm(f, 2.0);
    double expect = std::sqrt(std::pow(ksf::lp_norm(f, 2.0), 2) +
                              std::pow(ksf::w1p_seminorm(f, 2.0), 2));
    CHECK(w1 == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("snapshot files round-trip bit-exactly") {
    Grid2D g(12, 20, 1.5, 2.5);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    ScalarField f(g);
    for (double& v : f.values) v = u(rng);
    auto path = std::filesystem::temp_directory_path() / "ksf_roundtrip_test.ksf";
    ksf::write_snapshot(f, path.string());
    ScalarField back = ksf::read_snapshot(path.string());
    CHECK(back.grid == g);
    CHECK(back.values == f.values);
    std::filesystem::remove(path);
}
